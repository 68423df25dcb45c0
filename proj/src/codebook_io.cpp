#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "polarprec/precoding.hpp"

namespace polarprec {

namespace {

constexpr std::string_view kMagic = "polarprec-codebook";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token) {
  std::size_t used = 0;
  const double v = std::stod(token, &used);
  if (used != token.size()) throw ContractViolation("codebook file: bad number '" + token + "'");
  return v;
}

CodebookKind parse_kind(const std::string& s) {
  if (s == "DFT") return CodebookKind::dft;
  if (s == "W") return CodebookKind::w;
  if (s == "Q") return CodebookKind::q;
  throw ContractViolation("codebook file: unknown kind " + s);
}

}  // namespace

std::string format_codebook(const Codebook& book) {
  std::ostringstream os;
  os << kMagic << " kind=" << to_string(book.kind) << " mt=" << book.m_t << " m=" << book.m
     << " b=" << book.feedback_bits << " seed=" << book.seed << " trials=" << book.trials << " a=";
  for (std::size_t k = 0; k < book.rotation.size(); ++k) os << (k ? "," : "") << book.rotation[k];
  os << '\n';
  for (std::size_t idx = 0; idx < book.matrices.size(); ++idx) {
    const auto& f = book.matrices[idx];
    os << "matrix " << idx << '\n';
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
      for (Eigen::Index c = 0; c < f.cols(); ++c)
        os << (c ? " " : "") << format_double(f(r, c).real()) << ' ' << format_double(f(r, c).imag());
      os << '\n';
    }
  }
  return os.str();
}

std::vector<Codebook> parse_codebooks(const std::string& text) {
  std::istringstream is(text);
  std::vector<Codebook> books;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream hs(line);
    std::string magic;
    hs >> magic;
    if (magic != kMagic) throw ContractViolation("codebook file: expected header, got '" + line + "'");

    Codebook book;
    std::string field;
    bool have_kind = false;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ContractViolation("codebook file: malformed field " + field);
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "kind") {
        book.kind = parse_kind(value);
        have_kind = true;
      } else if (key == "mt")
        book.m_t = std::stoi(value);
      else if (key == "m")
        book.m = std::stoi(value);
      else if (key == "b")
        book.feedback_bits = std::stoi(value);
      else if (key == "seed")
        book.seed = std::stoull(value);
      else if (key == "trials")
        book.trials = std::stol(value);
      else if (key == "a") {
        std::istringstream as(value);
        std::string item;
        while (std::getline(as, item, ','))
          if (!item.empty()) book.rotation.push_back(std::stoi(item));
      } else
        throw ContractViolation("codebook file: unknown field " + key);
    }
    if (!have_kind || book.m_t < 1 || book.m < 1 || book.feedback_bits < 0 || book.feedback_bits > 16)
      throw ContractViolation("codebook file: incomplete header");

    const long count = 1L << book.feedback_bits;
    for (long idx = 0; idx < count; ++idx) {
      if (!std::getline(is, line) || line != "matrix " + std::to_string(idx))
        throw ContractViolation("codebook file: missing matrix block " + std::to_string(idx));
      ComplexMatrix f(book.m_t, book.m);
      for (int r = 0; r < book.m_t; ++r) {
        if (!std::getline(is, line)) throw ContractViolation("codebook file: truncated matrix");
        std::istringstream rs(line);
        for (int c = 0; c < book.m; ++c) {
          std::string re, im;
          if (!(rs >> re >> im)) throw ContractViolation("codebook file: short row");
          f(r, c) = Complex(parse_double(re), parse_double(im));
        }
      }
      if (!is_semi_unitary(f)) throw ContractViolation("codebook file: member is not semi-unitary");
      book.matrices.push_back(std::move(f));
    }
    books.push_back(std::move(book));
  }
  return books;
}

void write_codebooks(const std::filesystem::path& path, std::span<const Codebook> books) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (const auto& book : books) out << format_codebook(book);
}

std::vector<Codebook> read_codebooks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_codebooks(buf.str());
}

std::string codebook_digest(const Codebook& book) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : format_codebook(book)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace polarprec
