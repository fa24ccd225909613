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
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urecall/experiments.hpp"
#include "urecall/types.hpp"

namespace urecall {

// Maps external string ids to dense 1-based ids, in order of first
// appearance. The mapping is emitted alongside outputs so results stay
// joinable with the source data.
class IdMap {
 public:
  std::int64_t intern(const std::string& external);
  std::optional<std::int64_t> lookup(const std::string& external) const;
  const std::string& external(std::int64_t dense) const;
  std::int64_t size() const { return static_cast<std::int64_t>(externals_.size()); }

 private:
  std::map<std::string, std::int64_t> dense_;
  std::vector<std::string> externals_;
};

struct IdMaps {
  IdMap users;
  IdMap items;
};

// Key/value pairs embedded in every output file for provenance (tool
// version, scheme, cutoffs, seeds, input paths).
using Provenance = std::vector<std::pair<std::string, std::string>>;

// Reads `user_id,item_id,score` rows, one table per user, interning ids.
// The catalog is the set of distinct items in the file; every user must
// score every catalog item.
std::vector<PredictionTable> read_predictions_csv(
    const std::filesystem::path& path, IdMaps& maps);

// Reads `user_id,item_id,label` rows into per-user exposures. When
// `catalog` is non-null, items must already be interned (predictions read
// first); otherwise the catalog is inferred from the file. Validates the
// result and throws on any violation.
std::vector<LabeledExposure> read_exposure_csv(
    const std::filesystem::path& path, ExposureKind kind, IdMaps& maps,
    const Catalog* catalog);

// Writers are byte-stable: identical inputs produce identical bytes.
void write_exposure_csv(std::span<const LabeledExposure> exposures,
                        const IdMaps& maps, const std::filesystem::path& path);
void write_predictions_csv(std::span<const PredictionTable> tables,
                           const IdMaps& maps,
                           const std::filesystem::path& path);

void write_report_json(const EvalReport& report, const IdMaps& maps,
                       const Provenance& provenance,
                       const std::filesystem::path& path);
void write_report_csv(const EvalReport& report, const IdMaps& maps,
                      const Provenance& provenance,
                      const std::filesystem::path& path);

void write_curve_json(const CorrelationCurve& curve,
                      const Provenance& provenance,
                      const std::filesystem::path& path);
void write_curve_csv(const CorrelationCurve& curve,
                     const Provenance& provenance,
                     const std::filesystem::path& path);

void write_matrix_json(const CrossCorrelationMatrix& matrix,
                       const Provenance& provenance,
                       const std::filesystem::path& path);
void write_matrix_csv(const CrossCorrelationMatrix& matrix,
                      const Provenance& provenance,
                      const std::filesystem::path& path);

// Dense-id dictionary sidecar, written next to reports.
void write_idmap_json(const IdMaps& maps, const std::filesystem::path& path);

// Formats a double with shortest round-trip precision.
std::string format_double(double value);

}  // namespace urecall
