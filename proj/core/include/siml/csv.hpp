#pragma once

// Tick-data interchange in a minimal CSV dialect.
//
// Files are UTF-8 with LF line endings and carry one header line
// `time,asset,price` followed by one record per line.  Assets are free-form
// labels; records may arrive in any order.  Ingestion groups records by
// asset (in first-appearance order), sorts each asset's records by time
// with ties resolved by keeping the last record in file order, and can
// affinely rescale each asset's clock so that its first observation lands
// on 0 and its last on 1, which is the domain the estimators work on.

#include <iosfwd>
#include <string>
#include <vector>

#include "siml/simulate.hpp"

namespace siml {

struct TickRecord {
  double time = 0.0;
  std::string asset;
  double price = 0.0;
};

// Parse a tick stream.  `origin` names the source in error messages.
// Errors (malformed header, wrong field count, unparsable or non-finite
// numbers) are reported as std::invalid_argument with `origin:line:` prefixes.
std::vector<TickRecord> read_ticks(std::istream& in, const std::string& origin);
std::vector<TickRecord> read_ticks_file(const std::string& path);

// Group ticks into per-asset observation series on [0, 1].
//
// With `rescale_times` set, each asset's timestamps are mapped affinely to
// [0, 1]; otherwise the timestamps must already satisfy the grid contract
// (first tick at 0, last at 1, strictly increasing).  Duplicate timestamps
// within an asset collapse to the record appearing last in the file.  Every
// asset needs at least two distinct timestamps.  Asset order in the result
// follows first appearance in the input.  `asset_names` receives the labels
// when non-null.
ObservationSet ticks_to_observations(const std::vector<TickRecord>& ticks,
                                     bool rescale_times,
                                     std::vector<std::string>* asset_names = nullptr);

// read_ticks_file followed by ticks_to_observations.
ObservationSet ingest_csv(const std::string& path, bool rescale_times,
                          std::vector<std::string>* asset_names = nullptr);

// Write observations as a tick file, records sorted by time and then by
// asset index, numbers in round-trip decimal form.  Labels default to
// "asset-0", "asset-1", ...
void write_ticks_csv(const std::string& path, const ObservationSet& obs,
                     const std::vector<std::string>& asset_names = {});

}  // namespace siml
