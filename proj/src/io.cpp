/*
 * Copyright 2026 The urecall Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "urecall/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "urecall/version.hpp"

namespace urecall {
namespace {

using nlohmann::ordered_json;

struct Row {
  std::string first;
  std::string second;
  std::string third;
  std::size_t line = 0;
};

std::string trimmed(const std::string& field) {
  const auto begin = field.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = field.find_last_not_of(" \t");
  return field.substr(begin, end - begin + 1);
}

// Reads a three-column CSV with the given mandatory header.
std::vector<Row> read_rows(const std::filesystem::path& path,
                           const std::string& header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<Row> rows;
  std::string line;
  std::size_t line_number = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (trimmed(line) != header) {
        throw ParseError(path.string() + ":" + std::to_string(line_number) +
                         ": expected header '" + header + "'");
      }
      saw_header = true;
      continue;
    }
    if (trimmed(line).empty()) continue;

    Row row;
    row.line = line_number;
    std::size_t first_comma = line.find(',');
    std::size_t second_comma = first_comma == std::string::npos
                                   ? std::string::npos
                                   : line.find(',', first_comma + 1);
    if (first_comma == std::string::npos || second_comma == std::string::npos ||
        line.find(',', second_comma + 1) != std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(line_number) +
                       ": expected exactly three comma-separated fields");
    }
    row.first = trimmed(line.substr(0, first_comma));
    row.second =
        trimmed(line.substr(first_comma + 1, second_comma - first_comma - 1));
    row.third = trimmed(line.substr(second_comma + 1));
    if (row.first.empty() || row.second.empty() || row.third.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_number) +
                       ": empty field");
    }
    rows.push_back(std::move(row));
  }
  if (!saw_header) {
    throw ParseError(path.string() + ": empty file, expected header '" +
                     header + "'");
  }
  return rows;
}

double parse_score(const std::string& field, const std::filesystem::path& path,
                   std::size_t line) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw ParseError(path.string() + ":" + std::to_string(line) +
                     ": cannot parse score '" + field + "'");
  }
  if (!std::isfinite(value)) {
    throw InvalidScore(path.string() + ":" + std::to_string(line) +
                       ": non-finite score '" + field + "'");
  }
  return value;
}

void write_provenance_comments(std::ostream& out,
                               const Provenance& provenance) {
  out << "# tool=urecall\n# version=" << kVersion << "\n";
  for (const auto& [key, value] : provenance) {
    out << "# " << key << "=" << value << "\n";
  }
}

ordered_json provenance_json(const Provenance& provenance) {
  ordered_json meta;
  meta["tool"] = "urecall";
  meta["version"] = kVersion;
  for (const auto& [key, value] : provenance) meta[key] = value;
  return meta;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw Error("double formatting failed");
  return std::string(buffer, end);
}

std::int64_t IdMap::intern(const std::string& external) {
  const auto [it, inserted] =
      dense_.try_emplace(external, static_cast<std::int64_t>(externals_.size()) + 1);
  if (inserted) externals_.push_back(external);
  return it->second;
}

std::optional<std::int64_t> IdMap::lookup(const std::string& external) const {
  const auto it = dense_.find(external);
  if (it == dense_.end()) return std::nullopt;
  return it->second;
}

const std::string& IdMap::external(std::int64_t dense) const {
  return externals_.at(static_cast<std::size_t>(dense - 1));
}

std::vector<PredictionTable> read_predictions_csv(
    const std::filesystem::path& path, IdMaps& maps) {
  const auto rows = read_rows(path, "user_id,item_id,score");

  std::map<UserId, std::map<ItemId, double>> by_user;
  for (const auto& row : rows) {
    const UserId user = maps.users.intern(row.first);
    const ItemId item = static_cast<ItemId>(maps.items.intern(row.second));
    const double score = parse_score(row.third, path, row.line);
    auto& scores = by_user[user];
    if (!scores.emplace(item, score).second) {
      throw DuplicatePair(path.string() + ":" + std::to_string(row.line) +
                          ": duplicate (user, item) pair (" + row.first + ", " +
                          row.second + ")");
    }
  }
  if (by_user.empty()) {
    throw ParseError(path.string() + ": no prediction rows");
  }

  const ItemId item_count = static_cast<ItemId>(maps.items.size());
  std::vector<PredictionTable> tables;
  tables.reserve(by_user.size());
  for (const auto& [user, scores] : by_user) {
    if (scores.size() != static_cast<std::size_t>(item_count)) {
      for (ItemId item = 1; item <= item_count; ++item) {
        if (!scores.count(item)) {
          throw MissingPrediction(
              path.string() + ": user " + maps.users.external(user) +
              " has no score for item " + maps.items.external(item));
        }
      }
    }
    PredictionTable table;
    table.user = user;
    table.scores.resize(static_cast<std::size_t>(item_count));
    for (const auto& [item, score] : scores) {
      table.scores[static_cast<std::size_t>(item - 1)] = score;
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<LabeledExposure> read_exposure_csv(
    const std::filesystem::path& path, ExposureKind kind, IdMaps& maps,
    const Catalog* catalog) {
  const auto rows = read_rows(path, "user_id,item_id,label");

  std::map<UserId, LabeledExposure> by_user;
  std::set<std::pair<UserId, ItemId>> seen;
  for (const auto& row : rows) {
    const UserId user = maps.users.intern(row.first);
    ItemId item = 0;
    if (catalog != nullptr) {
      const auto dense = maps.items.lookup(row.second);
      if (!dense) {
        throw ParseError(path.string() + ":" + std::to_string(row.line) +
                         ": item '" + row.second +
                         "' is not in the prediction catalog");
      }
      item = static_cast<ItemId>(*dense);
    } else {
      item = static_cast<ItemId>(maps.items.intern(row.second));
    }

    std::uint8_t label = 0;
    if (row.third == "0") {
      label = 0;
    } else if (row.third == "1") {
      label = 1;
    } else {
      throw InvalidLabel(path.string() + ":" + std::to_string(row.line) +
                         ": label '" + row.third + "' is not 0 or 1");
    }
    if (!seen.emplace(user, item).second) {
      throw DuplicatePair(path.string() + ":" + std::to_string(row.line) +
                          ": duplicate (user, item) pair (" + row.first + ", " +
                          row.second + ")");
    }
    auto& exposure = by_user[user];
    exposure.user = user;
    exposure.kind = kind;
    exposure.entries.push_back({item, label});
  }
  if (by_user.empty()) {
    throw ParseError(path.string() + ": no exposure rows");
  }

  const Catalog effective =
      catalog != nullptr
          ? *catalog
          : Catalog{static_cast<ItemId>(maps.items.size())};

  std::vector<LabeledExposure> exposures;
  exposures.reserve(by_user.size());
  for (auto& [user, exposure] : by_user) {
    std::sort(exposure.entries.begin(), exposure.entries.end(),
              [](const ExposureEntry& a, const ExposureEntry& b) {
                return a.item < b.item;
              });
    exposures.push_back(std::move(exposure));
  }

  const auto summary = validate_dataset(exposures, effective);
  if (!summary.ok()) {
    const auto& issue = summary.issues.front();
    const std::string context =
        path.string() + ": user " + maps.users.external(issue.user) + ": " +
        issue.detail + " (and " + std::to_string(summary.issues.size() - 1) +
        " more)";
    if (issue.kind == ValidationIssue::Kind::kIncompleteFullExposure) {
      throw IncompleteFullExposure(context);
    }
    throw ParseError(context);
  }
  return exposures;
}

void write_exposure_csv(std::span<const LabeledExposure> exposures,
                        const IdMaps& maps,
                        const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "user_id,item_id,label\n";
  for (const auto& exposure : exposures) {
    for (const auto& entry : exposure.entries) {
      out << maps.users.external(exposure.user) << ','
          << maps.items.external(entry.item) << ','
          << static_cast<int>(entry.label) << '\n';
    }
  }
}

void write_predictions_csv(std::span<const PredictionTable> tables,
                           const IdMaps& maps,
                           const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "user_id,item_id,score\n";
  for (const auto& table : tables) {
    for (std::size_t i = 0; i < table.scores.size(); ++i) {
      out << maps.users.external(table.user) << ','
          << maps.items.external(static_cast<std::int64_t>(i + 1)) << ','
          << format_double(table.scores[i]) << '\n';
    }
  }
}

void write_report_json(const EvalReport& report, const IdMaps& maps,
                       const Provenance& provenance,
                       const std::filesystem::path& path) {
  ordered_json doc;
  doc["meta"] = provenance_json(provenance);
  doc["scheme"] = to_string(report.scheme);
  doc["k"] = report.cutoff;
  doc["macro_mean"] = report.macro_mean;
  doc["evaluated_users"] = report.per_user.size();
  doc["skipped_users"] = report.skipped.size();

  ordered_json per_user = ordered_json::array();
  for (const auto& [user, value] : report.per_user) {
    per_user.push_back({{"user", maps.users.external(user)}, {"value", value}});
  }
  doc["per_user"] = std::move(per_user);

  ordered_json skipped = ordered_json::array();
  for (const auto& [user, reason] : report.skipped) {
    skipped.push_back(
        {{"user", maps.users.external(user)}, {"reason", to_string(reason)}});
  }
  doc["skipped"] = std::move(skipped);

  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

void write_report_csv(const EvalReport& report, const IdMaps& maps,
                      const Provenance& provenance,
                      const std::filesystem::path& path) {
  auto out = open_output(path);
  write_provenance_comments(out, provenance);
  out << "# scheme=" << to_string(report.scheme) << "\n# k=" << report.cutoff
      << "\n# macro_mean=" << format_double(report.macro_mean) << "\n";
  out << "user_id,value,skip_reason\n";
  // Evaluated and skipped users interleaved in id order.
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  while (evaluated < report.per_user.size() ||
         skipped < report.skipped.size()) {
    const bool take_evaluated =
        skipped == report.skipped.size() ||
        (evaluated < report.per_user.size() &&
         report.per_user[evaluated].first < report.skipped[skipped].first);
    if (take_evaluated) {
      const auto& [user, value] = report.per_user[evaluated++];
      out << maps.users.external(user) << ',' << format_double(value) << ",\n";
    } else {
      const auto& [user, reason] = report.skipped[skipped++];
      out << maps.users.external(user) << ",," << to_string(reason) << "\n";
    }
  }
}

void write_curve_json(const CorrelationCurve& curve,
                      const Provenance& provenance,
                      const std::filesystem::path& path) {
  ordered_json doc;
  doc["meta"] = provenance_json(provenance);
  doc["fixed"] = to_string(curve.fixed);
  doc["k_max"] = curve.k_max;
  ordered_json points = ordered_json::array();
  for (std::size_t i = 0; i < curve.k_grid.size(); ++i) {
    ordered_json point;
    point["k"] = curve.k_grid[i];
    if (curve.pearson_r[i]) {
      point["pearson_r"] = *curve.pearson_r[i];
    } else {
      point["pearson_r"] = nullptr;
    }
    points.push_back(std::move(point));
  }
  doc["points"] = std::move(points);
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

void write_curve_csv(const CorrelationCurve& curve,
                     const Provenance& provenance,
                     const std::filesystem::path& path) {
  auto out = open_output(path);
  write_provenance_comments(out, provenance);
  out << "# fixed=" << to_string(curve.fixed) << "\n# k_max=" << curve.k_max
      << "\n";
  out << "k,pearson_r\n";
  for (std::size_t i = 0; i < curve.k_grid.size(); ++i) {
    out << curve.k_grid[i] << ',';
    if (curve.pearson_r[i]) out << format_double(*curve.pearson_r[i]);
    out << '\n';
  }
}

void write_matrix_json(const CrossCorrelationMatrix& matrix,
                       const Provenance& provenance,
                       const std::filesystem::path& path) {
  ordered_json doc;
  doc["meta"] = provenance_json(provenance);
  doc["k_targets"] = matrix.k_targets;
  ordered_json rows = ordered_json::array();
  for (const auto& row : matrix.r) {
    ordered_json cells = ordered_json::array();
    for (const auto& cell : row) {
      if (cell) {
        cells.push_back(*cell);
      } else {
        cells.push_back(nullptr);
      }
    }
    rows.push_back(std::move(cells));
  }
  doc["pearson_r"] = std::move(rows);
  doc["row_argmax_k"] = ordered_json::array();
  for (const int argmax : matrix.row_argmax) {
    if (argmax < 0) {
      doc["row_argmax_k"].push_back(nullptr);
    } else {
      doc["row_argmax_k"].push_back(matrix.k_targets[argmax]);
    }
  }
  doc["diagonal_dominant"] = matrix.diagonal_dominant;
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

void write_matrix_csv(const CrossCorrelationMatrix& matrix,
                      const Provenance& provenance,
                      const std::filesystem::path& path) {
  auto out = open_output(path);
  write_provenance_comments(out, provenance);
  out << "# diagonal_dominant=" << (matrix.diagonal_dominant ? "true" : "false")
      << "\n";
  out << "estimate_k,gold_k,pearson_r\n";
  for (std::size_t i = 0; i < matrix.k_targets.size(); ++i) {
    for (std::size_t j = 0; j < matrix.k_targets.size(); ++j) {
      out << matrix.k_targets[i] << ',' << matrix.k_targets[j] << ',';
      if (matrix.r[i][j]) out << format_double(*matrix.r[i][j]);
      out << '\n';
    }
  }
}

void write_idmap_json(const IdMaps& maps, const std::filesystem::path& path) {
  ordered_json doc;
  ordered_json users = ordered_json::array();
  for (std::int64_t dense = 1; dense <= maps.users.size(); ++dense) {
    users.push_back(maps.users.external(dense));
  }
  ordered_json items = ordered_json::array();
  for (std::int64_t dense = 1; dense <= maps.items.size(); ++dense) {
    items.push_back(maps.items.external(dense));
  }
  // dense id = 1-based position in the array.
  doc["users"] = std::move(users);
  doc["items"] = std::move(items);
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

}  // namespace urecall
