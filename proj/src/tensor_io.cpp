#include "mmbarrier/tensor_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "mmbarrier/error.hpp"

namespace mmbarrier {
namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::int64_t parse_int(const std::string& text, std::size_t line, const std::string& field) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ParseError(line, field, "expected an integer, got '" + text + "'");
  }
  if (used != text.size()) throw ParseError(line, field, "expected an integer, got '" + text + "'");
  return value;
}

std::size_t parse_index(const std::string& text, std::size_t line, const std::string& field) {
  const std::int64_t v = parse_int(text, line, field);
  if (v < 0) throw ParseError(line, field, "index must be nonnegative");
  return static_cast<std::size_t>(v);
}

Rational parse_rational(const std::string& text, std::size_t line) {
  const std::size_t slash = text.find('/');
  const std::int64_t num = parse_int(text.substr(0, slash), line, "coefficient");
  std::int64_t den = 1;
  if (slash != std::string::npos) den = parse_int(text.substr(slash + 1), line, "coefficient");
  if (den == 0) throw ParseError(line, "coefficient", "zero denominator");
  if (num == 0) throw ParseError(line, "coefficient", "coefficient must be nonzero");
  return Rational(num, den);
}

}  // namespace

Tensor parse_tensor(const std::string& document) {
  std::istringstream in(document);
  std::string raw;
  std::size_t line_no = 0;
  bool have_dims = false;
  Dims dims{};
  std::map<Triple, std::pair<Rational, std::size_t>> entries;

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto words = split_words(raw);
    if (words.empty()) continue;

    if (!have_dims) {
      if (words[0] != "dims") throw ParseError(line_no, "header", "expected 'dims n1 n2 n3' first");
      if (words.size() != 4) throw ParseError(line_no, "header", "'dims' takes three sizes");
      for (std::size_t a = 0; a < 3; ++a) {
        dims[a] = parse_index(words[a + 1], line_no, "dims");
        if (dims[a] == 0) throw ParseError(line_no, "dims", "dimension must be positive");
      }
      have_dims = true;
      continue;
    }

    if (words.size() != 4) throw ParseError(line_no, "entry", "expected 'i j k num/den'");
    const Triple t{parse_index(words[0], line_no, "i"), parse_index(words[1], line_no, "j"),
                   parse_index(words[2], line_no, "k")};
    static constexpr const char* kAxis[] = {"i", "j", "k"};
    for (std::size_t a = 0; a < 3; ++a) {
      if (t[a] >= dims[a]) {
        throw ParseError(line_no, kAxis[a],
                         "index " + std::to_string(t[a]) + " out of range for dimension " + std::to_string(dims[a]));
      }
    }
    const Rational c = parse_rational(words[3], line_no);
    const auto [it, inserted] = entries.emplace(t, std::make_pair(c, line_no));
    if (!inserted) {
      throw ParseError(line_no, "entry", "duplicate triple, first given on line " + std::to_string(it->second.second));
    }
  }
  if (!have_dims) throw ParseError(line_no, "header", "missing 'dims' line");
  if (entries.empty()) throw ParseError(line_no, "entry", "tensor has no support points");

  std::vector<std::pair<Triple, Rational>> flat;
  flat.reserve(entries.size());
  for (const auto& [t, c] : entries) flat.emplace_back(t, c.first);
  return Tensor(dims, std::move(flat));
}

std::string serialize_tensor(const Tensor& tensor) {
  std::ostringstream out;
  const Dims& d = tensor.dims();
  out << "dims " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
  const auto& points = tensor.support().points();
  for (std::size_t n = 0; n < points.size(); ++n) {
    const Rational& c = tensor.coefficients()[n];
    out << points[n].i << ' ' << points[n].j << ' ' << points[n].k << ' ' << c.numerator() << '/'
        << c.denominator() << '\n';
  }
  return out.str();
}

Tensor read_tensor_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidArgument("cannot open tensor file '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_tensor(buf.str());
}

Tensor resolve_tensor(const std::string& spec) {
  if (is_builtin_id(spec)) return builtin_tensor(spec);
  return read_tensor_file(spec);
}

}  // namespace mmbarrier
