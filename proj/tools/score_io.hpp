#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "probesim/types.hpp"

namespace probesim::cli {

/// One row of a score file: "node<TAB>score" or "query<TAB>node<TAB>score".
struct ScoreRow {
  std::optional<Label> query;
  Label node;
  double score;
};

std::vector<ScoreRow> read_score_rows(std::istream& in);
std::vector<ScoreRow> read_score_file(const std::string& path);

}  // namespace probesim::cli
