#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fwsdp/conic_program.hpp"
#include "fwsdp/errors.hpp"

namespace fwsdp {

namespace {

// Token stream over SDPA sparse text. Braces, parentheses and commas are
// separators, as in the reference readers.
class TokenStream {
 public:
  explicit TokenStream(const std::string& text) : text_(text) {}

  bool next(std::string& token, long& line) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' ||
          c == '}' || c == '(' || c == ')') {
        ++pos_;
        continue;
      }
      break;
    }
    if (pos_ >= text_.size()) return false;
    const size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' ||
          c == '}' || c == '(' || c == ')' || c == '\n')
        break;
      ++pos_;
    }
    token = text_.substr(start, pos_ - start);
    line = line_;
    return true;
  }

  long line() const { return line_; }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  long line_ = 1;
};

long parse_int(const std::string& token, long line, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(std::string("expected ") + what + ", got '" + token + "'", line);
  return value;
}

double parse_real(const std::string& token, long line, const char* what) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || token.empty())
    throw ParseError(std::string("expected ") + what + ", got '" + token + "'", line);
  if (!std::isfinite(value))
    throw ParseError(std::string("non-finite ") + what + " '" + token + "'", line);
  return value;
}

}  // namespace

ConicProgram parse_sdpa(const std::string& text) {
  // Strip leading comment lines (* or ") before tokenizing.
  std::string body;
  body.reserve(text.size());
  size_t pos = 0;
  long skipped = 0;
  bool in_header = true;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view lineview(text.data() + pos, eol - pos);
    size_t first = lineview.find_first_not_of(" \t\r");
    if (in_header && first != std::string_view::npos &&
        (lineview[first] == '*' || lineview[first] == '"')) {
      ++skipped;
      body.push_back('\n');  // keep line numbers aligned
    } else {
      if (first != std::string_view::npos) in_header = false;
      body.append(lineview);
      body.push_back('\n');
    }
    pos = eol + 1;
  }
  (void)skipped;

  TokenStream tokens(body);
  std::string tok;
  long line = 1;
  auto need = [&](const char* what) {
    if (!tokens.next(tok, line))
      throw ParseError(std::string("unexpected end of file, expected ") + what,
                       tokens.line());
  };

  need("the constraint count m");
  const long m = parse_int(tok, line, "the constraint count m");
  if (m < 0) throw ParseError("constraint count must be nonnegative", line);
  need("the block count");
  const long nblocks = parse_int(tok, line, "the block count");
  if (nblocks < 1) throw ParseError("block count must be positive", line);

  // Negative sizes are diagonal blocks: that many 1x1 PSD blocks.
  struct BlockRef {
    int first_psd;  // index of the first cone block this SDPA block maps to
    int dim;        // matrix dimension (>= 1)
    bool diagonal;
  };
  std::vector<BlockRef> block_refs;
  ConicProgram prog;
  for (long k = 0; k < nblocks; ++k) {
    need("a block size");
    const long size = parse_int(tok, line, "a block size");
    if (size == 0) throw ParseError("block sizes must be nonzero", line);
    BlockRef ref;
    ref.first_psd = prog.cone.block_count();
    ref.dim = static_cast<int>(std::abs(size));
    ref.diagonal = size < 0;
    if (ref.diagonal) {
      for (int d = 0; d < ref.dim; ++d) prog.cone.psd_dims.push_back(1);
    } else {
      prog.cone.psd_dims.push_back(ref.dim);
    }
    block_refs.push_back(ref);
  }

  prog.rhs.resize(static_cast<size_t>(m));
  for (long i = 0; i < m; ++i) {
    need("a right-hand-side value");
    prog.rhs[static_cast<size_t>(i)] = parse_real(tok, line, "a right-hand-side value");
  }

  prog.objective = BlockMatrix::zero(prog.cone);
  prog.constraints.assign(static_cast<size_t>(m), BlockMatrix::zero(prog.cone));

  while (tokens.next(tok, line)) {
    const long matno = parse_int(tok, line, "a matrix number");
    if (matno < 0 || matno > m)
      throw ParseError("matrix number " + std::to_string(matno) +
                       " out of range 0.." + std::to_string(m), line);
    need("a block number");
    const long blkno = parse_int(tok, line, "a block number");
    if (blkno < 1 || blkno > nblocks)
      throw ParseError("block number " + std::to_string(blkno) +
                       " out of range 1.." + std::to_string(nblocks), line);
    const BlockRef& ref = block_refs[static_cast<size_t>(blkno) - 1];
    need("a row index");
    const long i = parse_int(tok, line, "a row index");
    need("a column index");
    const long j = parse_int(tok, line, "a column index");
    need("an entry value");
    const double value = parse_real(tok, line, "an entry value");
    if (i < 1 || j < 1 || i > ref.dim || j > ref.dim)
      throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                       ") outside block of size " + std::to_string(ref.dim), line);
    if (i > j)
      throw ParseError("entries must satisfy i <= j, got (" + std::to_string(i) +
                       "," + std::to_string(j) + ")", line);
    if (ref.diagonal && i != j)
      throw ParseError("off-diagonal entry in diagonal block", line);

    BlockMatrix& target = matno == 0 ? prog.objective
                                     : prog.constraints[static_cast<size_t>(matno) - 1];
    if (ref.diagonal) {
      SymmetricMatrix& blk = target.blocks[static_cast<size_t>(ref.first_psd + i - 1)];
      blk.set(0, 0, blk(0, 0) + value);
    } else {
      target.blocks[static_cast<size_t>(ref.first_psd)].add(static_cast<int>(i) - 1,
                                                            static_cast<int>(j) - 1, value);
    }
  }

  prog.validate();
  return prog;
}

std::string emit_sdpa(const ConicProgram& prog) {
  prog.validate();
  if (prog.cone.free_dim > 0)
    throw Error("programs with a free segment have no SDPA sparse form; "
                "use the JSON format");

  std::ostringstream out;
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  out << prog.constraint_count() << "\n";
  out << prog.cone.block_count() << "\n";
  for (size_t k = 0; k < prog.cone.psd_dims.size(); ++k) {
    if (k > 0) out << ' ';
    out << prog.cone.psd_dims[k];
  }
  out << "\n";
  for (size_t i = 0; i < prog.rhs.size(); ++i) {
    if (i > 0) out << ' ';
    out << real(prog.rhs[i]);
  }
  out << "\n";

  auto emit_entries = [&](const BlockMatrix& m, long matno) {
    for (size_t k = 0; k < m.blocks.size(); ++k) {
      const SymmetricMatrix& blk = m.blocks[k];
      for (int a = 0; a < blk.dim(); ++a)
        for (int b = a; b < blk.dim(); ++b)
          if (blk(a, b) != 0.0)
            out << matno << ' ' << (k + 1) << ' ' << (a + 1) << ' ' << (b + 1)
                << ' ' << real(blk(a, b)) << "\n";
    }
  };
  emit_entries(prog.objective, 0);
  for (int i = 0; i < prog.constraint_count(); ++i)
    emit_entries(prog.constraints[static_cast<size_t>(i)], i + 1);
  return out.str();
}

}  // namespace fwsdp
