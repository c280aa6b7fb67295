#include "score_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace probesim::cli {

namespace {

Label to_label(const std::string& token, std::size_t line_no) {
  Label value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "bad node label '" + token + "'");
  }
  return value;
}

double to_score(const std::string& token, std::size_t line_no) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) throw ParseError(line_no, "bad score '" + token + "'");
  return value;
}

}  // namespace

std::vector<ScoreRow> read_score_rows(std::istream& in) {
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() == 2) {
      rows.push_back({std::nullopt, to_label(tokens[0], line_no), to_score(tokens[1], line_no)});
    } else if (tokens.size() == 3) {
      rows.push_back({to_label(tokens[0], line_no), to_label(tokens[1], line_no),
                      to_score(tokens[2], line_no)});
    } else {
      throw ParseError(line_no, "expected 2 or 3 fields");
    }
  }
  return rows;
}

std::vector<ScoreRow> read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_score_rows(in);
}

}  // namespace probesim::cli
