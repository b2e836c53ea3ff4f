#include "siml/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "siml/stats.hpp"

namespace siml {
namespace {

[[noreturn]] void fail_at(const std::string& origin, std::size_t line, const std::string& msg) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

}  // namespace

std::vector<TickRecord> read_ticks(std::istream& in, const std::string& origin) {
  std::vector<TickRecord> ticks;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line != "time,asset,price")
        fail_at(origin, lineno, "expected header \"time,asset,price\", got \"" + line + "\"");
      saw_header = true;
      continue;
    }
    if (line.empty()) fail_at(origin, lineno, "empty line");
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos)
      fail_at(origin, lineno, "expected exactly three comma-separated fields");
    TickRecord rec;
    const std::string time_s = line.substr(0, c1);
    rec.asset = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string price_s = line.substr(c2 + 1);
    if (!parse_double(time_s, rec.time))
      fail_at(origin, lineno, "cannot parse time \"" + time_s + "\" as a finite number");
    if (rec.asset.empty()) fail_at(origin, lineno, "empty asset label");
    if (!parse_double(price_s, rec.price))
      fail_at(origin, lineno, "cannot parse price \"" + price_s + "\" as a finite number");
    ticks.push_back(std::move(rec));
  }
  if (!saw_header) throw std::invalid_argument(origin + ": empty input, header line missing");
  return ticks;
}

std::vector<TickRecord> read_ticks_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open tick file: " + path);
  return read_ticks(in, path);
}

ObservationSet ticks_to_observations(const std::vector<TickRecord>& ticks,
                                     bool rescale_times,
                                     std::vector<std::string>* asset_names) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::pair<double, double>>> series;
  for (const TickRecord& rec : ticks) {
    auto it = index.find(rec.asset);
    if (it == index.end()) {
      it = index.emplace(rec.asset, order.size()).first;
      order.push_back(rec.asset);
      series.emplace_back();
    }
    series[it->second].emplace_back(rec.time, rec.price);
  }
  if (order.empty()) throw std::invalid_argument("tick data holds no records");

  ObservationSet obs;
  obs.fine_steps = 0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    std::vector<std::pair<double, double>>& s = series[j];
    // Stable sort keeps file order among equal timestamps, so taking the
    // last entry of each run implements "duplicate timestamps: last wins".
    std::stable_sort(s.begin(), s.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> times;
    std::vector<double> prices;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i + 1 < s.size() && s[i + 1].first == s[i].first) continue;
      times.push_back(s[i].first);
      prices.push_back(s[i].second);
    }
    if (times.size() < 2)
      throw std::invalid_argument("asset \"" + order[j] +
                                  "\" needs at least two distinct timestamps");
    if (rescale_times) {
      const double t0 = times.front();
      const double span = times.back() - t0;
      for (double& t : times) t = (t - t0) / span;
      times.front() = 0.0;
      times.back() = 1.0;
    }
    try {
      obs.grids.emplace_back(std::move(times));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("asset \"" + order[j] + "\": " + e.what() +
                                  (rescale_times ? "" : " (give rescale_times to map onto [0,1])"));
    }
    obs.values.push_back(std::move(prices));
  }
  if (asset_names) *asset_names = std::move(order);
  return obs;
}

ObservationSet ingest_csv(const std::string& path, bool rescale_times,
                          std::vector<std::string>* asset_names) {
  return ticks_to_observations(read_ticks_file(path), rescale_times, asset_names);
}

void write_ticks_csv(const std::string& path, const ObservationSet& obs,
                     const std::vector<std::string>& asset_names) {
  if (!asset_names.empty() && static_cast<int>(asset_names.size()) != obs.assets())
    throw std::invalid_argument("write_ticks_csv: one name per asset required");
  struct Row {
    double time;
    int asset;
    double price;
  };
  std::vector<Row> rows;
  for (int j = 0; j < obs.assets(); ++j) {
    const std::vector<double>& t = obs.grids[static_cast<std::size_t>(j)].times();
    const std::vector<double>& v = obs.values[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < t.size(); ++i) rows.push_back({t[i], j, v[i]});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.asset < b.asset;
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "time,asset,price\n";
  for (const Row& row : rows) {
    const std::string label = asset_names.empty()
                                  ? "asset-" + std::to_string(row.asset)
                                  : asset_names[static_cast<std::size_t>(row.asset)];
    out << format_number(row.time) << ',' << label << ',' << format_number(row.price) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace siml
