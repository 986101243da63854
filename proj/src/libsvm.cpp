#include "adasketch/libsvm.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "adasketch/errors.hpp"

namespace adasketch {

namespace {

bool parse_double(std::string_view tok, double& out) {
  // std::from_chars for double is available in libstdc++ 11.
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_index(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Dataset parse_libsvm(std::string_view text) {
  Dataset data;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }

    double label = 0.0;
    if (!parse_double(tokens[0], label)) throw ParseError(line_no, "non-numeric label '" + std::string(tokens[0]) + "'");
    SparseRow row;
    Index last_index = -1;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos)
        throw ParseError(line_no, "malformed token '" + std::string(tokens[t]) + "'");
      long long idx = 0;
      double value = 0.0;
      if (!parse_index(tokens[t].substr(0, colon), idx) || idx < 1)
        throw ParseError(line_no, "bad feature index in '" + std::string(tokens[t]) + "'");
      if (!parse_double(tokens[t].substr(colon + 1), value))
        throw ParseError(line_no, "bad feature value in '" + std::string(tokens[t]) + "'");
      const Index zero_based = static_cast<Index>(idx - 1);
      if (zero_based <= last_index) throw ParseError(line_no, "feature indices must be increasing");
      last_index = zero_based;
      row.push_back({zero_based, value});
      data.n_features = std::max(data.n_features, zero_based + 1);
    }
    data.labels.push_back(label > 0.0 ? 1.0 : -1.0);
    data.rows.push_back(std::move(row));
    if (end == text.size()) break;
  }
  return data;
}

Dataset load_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_libsvm(buf.str());
}

std::string serialize_libsvm(const Dataset& data) {
  std::string out;
  for (std::size_t r = 0; r < data.size(); ++r) {
    out += data.labels[r] > 0.0 ? "+1" : "-1";
    for (const auto& e : data.rows[r]) out += fmt::format(" {}:{:.17g}", e.index + 1, e.value);
    out += '\n';
  }
  return out;
}

}  // namespace adasketch
