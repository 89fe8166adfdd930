// Copyright 2026 The Polar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polar/store.h"

#include <fcntl.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "polar/error.h"

namespace polar {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Record (de)serialization

namespace {

json layout_params_json(const LayoutParams& p) {
  return {{"repulsion", p.repulsion},
          {"gravity", p.gravity},
          {"iterations", p.iterations},
          {"initial_speed", p.initial_speed},
          {"max_displacement", p.max_displacement},
          {"seed", p.seed},
          {"repulsion_mode", p.repulsion_mode == Repulsion::kExact ? "exact" : "barnes_hut"},
          {"theta", p.theta}};
}

LayoutParams layout_params_from(const json& j) {
  LayoutParams p;
  p.repulsion = j.at("repulsion").get<double>();
  p.gravity = j.at("gravity").get<double>();
  p.iterations = j.at("iterations").get<int>();
  p.initial_speed = j.at("initial_speed").get<double>();
  p.max_displacement = j.at("max_displacement").get<double>();
  p.seed = j.at("seed").get<uint64_t>();
  const auto mode = j.at("repulsion_mode").get<std::string>();
  if (mode != "exact" && mode != "barnes_hut") throw std::invalid_argument("repulsion_mode");
  p.repulsion_mode = mode == "exact" ? Repulsion::kExact : Repulsion::kBarnesHut;
  p.theta = j.at("theta").get<double>();
  return p;
}

json tweets_json(const std::vector<RepresentativeTweet>& tweets) {
  json out = json::array();
  for (const auto& t : tweets) {
    out.push_back({{"user", t.user_id},
                   {"tweet_id", t.tweet_id},
                   {"text", t.text},
                   {"endorsements", t.endorsements}});
  }
  return out;
}

std::vector<RepresentativeTweet> tweets_from(const json& j) {
  std::vector<RepresentativeTweet> out;
  for (const json& t : j) {
    out.push_back({t.at("user").get<std::string>(), t.at("tweet_id").get<std::string>(),
                   t.at("text").get<std::string>(), t.at("endorsements").get<Weight>()});
  }
  return out;
}

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(Errc::kCorruptRecord, what);
}

}  // namespace

json to_json(const TopicRecord& r) {
  json keywords = json::array();
  for (const Keyword& k : r.summary.related_keywords) {
    keywords.push_back({{"term", k.term}, {"score", k.score}});
  }
  return {
      {"schema_version", kSchemaVersion},
      {"hashtag", r.hashtag},
      {"day", r.day.to_string()},
      {"stats",
       {{"users", r.stats.users},
        {"vertices", r.stats.vertices},
        {"edges", r.stats.edges},
        {"tweets", r.stats.tweets},
        {"largest_component_fraction", r.stats.largest_component_fraction}}},
      {"graph", to_node_link(r.graph)},
      {"partition",
       {{"labels", r.partition.labels()},
        {"cut_weight", r.partition.cut_weight},
        {"balance", r.partition.balance},
        {"seed", r.partition.seed}}},
      {"score",
       {{"p_xx", r.score.p_xx},
        {"p_xy", r.score.p_xy},
        {"p_yx", r.score.p_yx},
        {"p_yy", r.score.p_yy},
        {"rwc_raw", r.score.rwc_raw},
        {"display_score", r.score.display_score},
        {"k", r.score.k},
        {"authorities_x", r.score.authorities_x},
        {"authorities_y", r.score.authorities_y},
        {"method", method_name(r.score.method)},
        {"walks", r.score.walks},
        {"discarded_walks", r.score.discarded_walks},
        {"stderr_estimate", r.score.stderr_estimate}}},
      {"layout", r.layout},
      {"layout_info",
       {{"converged", r.layout_info.converged},
        {"iterations", r.layout_info.iterations},
        {"final_mean_displacement", r.layout_info.final_mean_displacement}}},
      {"summary",
       {{"hashtag", r.summary.hashtag},
        {"related_keywords", std::move(keywords)},
        {"representative",
         {{"X", tweets_json(r.summary.representative[0])},
          {"Y", tweets_json(r.summary.representative[1])}}}}},
      {"provenance",
       {{"seed", r.provenance.seed},
        {"balance_eps", r.provenance.balance_eps},
        {"authorities_k", r.provenance.authorities_k},
        {"mode", r.provenance.mode},
        {"walks", r.provenance.walks},
        {"min_users", r.provenance.min_users},
        {"layout", layout_params_json(r.provenance.layout)},
        {"software_version", r.provenance.software_version}}},
  };
}

TopicRecord topic_record_from_json(const json& doc) {
  TopicRecord r;
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      corrupt("unsupported schema_version");
    }
    r.hashtag = doc.at("hashtag").get<std::string>();
    auto day = Day::parse(doc.at("day").get<std::string>());
    if (!day) corrupt("bad day");
    r.day = *day;

    const json& stats = doc.at("stats");
    r.stats.users = stats.at("users").get<size_t>();
    r.stats.vertices = stats.at("vertices").get<size_t>();
    r.stats.edges = stats.at("edges").get<size_t>();
    r.stats.tweets = stats.at("tweets").get<size_t>();
    r.stats.largest_component_fraction = stats.at("largest_component_fraction").get<double>();

    r.graph = from_node_link(doc.at("graph"));

    const json& part = doc.at("partition");
    for (char c : part.at("labels").get<std::string>()) {
      if (c != 'X' && c != 'Y') corrupt("bad partition label");
      r.partition.side.push_back(c == 'X' ? Side::kX : Side::kY);
    }
    r.partition.cut_weight = part.at("cut_weight").get<Weight>();
    r.partition.balance = part.at("balance").get<double>();
    r.partition.seed = part.at("seed").get<uint64_t>();

    const json& score = doc.at("score");
    r.score.p_xx = score.at("p_xx").get<double>();
    r.score.p_xy = score.at("p_xy").get<double>();
    r.score.p_yx = score.at("p_yx").get<double>();
    r.score.p_yy = score.at("p_yy").get<double>();
    r.score.rwc_raw = score.at("rwc_raw").get<double>();
    r.score.display_score = score.at("display_score").get<double>();
    r.score.k = score.at("k").get<size_t>();
    r.score.authorities_x = score.at("authorities_x").get<size_t>();
    r.score.authorities_y = score.at("authorities_y").get<size_t>();
    const auto method = score.at("method").get<std::string>();
    if (method != "exact" && method != "montecarlo") corrupt("bad score method");
    r.score.method = method == "exact" ? ScoreMethod::kExact : ScoreMethod::kMonteCarlo;
    r.score.walks = score.at("walks").get<uint64_t>();
    r.score.discarded_walks = score.at("discarded_walks").get<uint64_t>();
    r.score.stderr_estimate = score.at("stderr_estimate").get<double>();

    r.layout = doc.at("layout");
    const json& info = doc.at("layout_info");
    r.layout_info.converged = info.at("converged").get<bool>();
    r.layout_info.iterations = info.at("iterations").get<int>();
    r.layout_info.final_mean_displacement = info.at("final_mean_displacement").get<double>();

    const json& summary = doc.at("summary");
    r.summary.hashtag = summary.at("hashtag").get<std::string>();
    for (const json& k : summary.at("related_keywords")) {
      r.summary.related_keywords.push_back(
          {k.at("term").get<std::string>(), k.at("score").get<size_t>()});
    }
    r.summary.representative[0] = tweets_from(summary.at("representative").at("X"));
    r.summary.representative[1] = tweets_from(summary.at("representative").at("Y"));

    const json& prov = doc.at("provenance");
    r.provenance.seed = prov.at("seed").get<uint64_t>();
    r.provenance.balance_eps = prov.at("balance_eps").get<double>();
    r.provenance.authorities_k = prov.at("authorities_k").get<size_t>();
    r.provenance.mode = prov.at("mode").get<std::string>();
    r.provenance.walks = prov.at("walks").get<uint64_t>();
    r.provenance.min_users = prov.at("min_users").get<size_t>();
    r.provenance.layout = layout_params_from(prov.at("layout"));
    r.provenance.software_version = prov.at("software_version").get<std::string>();
  } catch (const json::exception& e) {
    corrupt(std::string("schema violation: ") + e.what());
  } catch (const std::invalid_argument& e) {
    corrupt(std::string("schema violation: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::kCorruptRecord) throw;
    corrupt(e.what());
  }
  return r;
}

std::optional<std::string> validate(const TopicRecord& r) {
  const size_t n = r.graph.num_vertices();
  if (r.hashtag.empty()) return "empty hashtag";
  if (r.summary.hashtag != r.hashtag) return "summary hashtag differs";
  if (n == 0) return "empty graph";
  if (r.stats.vertices != n) return "stats.vertices != graph vertices";
  if (r.stats.edges != r.graph.undirected.num_edges()) return "stats.edges != graph edges";
  if (r.stats.users < n) return "stats.users smaller than the scored component";
  if (!(r.stats.largest_component_fraction > 0 && r.stats.largest_component_fraction <= 1)) {
    return "largest_component_fraction outside (0, 1]";
  }
  if (r.partition.side.size() != n) return "partition size != vertex count";
  if (cut_weight(r.graph.undirected, r.partition.side) != r.partition.cut_weight) {
    return "partition cut weight is stale";
  }
  const size_t nx = r.partition.count(Side::kX), ny = r.partition.count(Side::kY);
  if (r.score.authorities_x != std::min(r.score.k, nx) ||
      r.score.authorities_y != std::min(r.score.k, ny)) {
    return "authority counts inconsistent with k and side sizes";
  }
  for (double p : {r.score.p_xx, r.score.p_xy, r.score.p_yx, r.score.p_yy}) {
    if (!(p >= 0 && p <= 1)) return "probability outside [0, 1]";
  }
  if (!(r.score.rwc_raw >= -1 && r.score.rwc_raw <= 1)) return "rwc_raw outside [-1, 1]";
  if (!(r.score.display_score >= 0 && r.score.display_score <= 1)) {
    return "display_score outside [0, 1]";
  }
  if (std::abs(r.score.rwc_raw - (r.score.p_xx * r.score.p_yy - r.score.p_yx * r.score.p_xy)) >
      1e-12) {
    return "rwc_raw does not match the probabilities";
  }
  if (r.score.display_score != std::max(0.0, r.score.rwc_raw)) {
    return "display_score is not max(0, rwc_raw)";
  }
  if (!r.layout.is_object() || !r.layout.contains("nodes") || !r.layout["nodes"].is_array() ||
      r.layout["nodes"].size() != n) {
    return "layout payload does not match the graph";
  }
  for (size_t v = 0; v < n; ++v) {
    const json& node = r.layout["nodes"][v];
    if (!node.contains("side") || node["side"] != std::string(1, side_letter(r.partition.side[v]))) {
      return "layout side labels differ from the partition";
    }
  }
  for (size_t s = 0; s < 2; ++s) {
    std::vector<std::string_view> authors;
    for (const auto& t : r.summary.representative[s]) authors.push_back(t.user_id);
    std::sort(authors.begin(), authors.end());
    if (std::adjacent_find(authors.begin(), authors.end()) != authors.end()) {
      return "representative authors repeat";
    }
  }
  for (const Keyword& k : r.summary.related_keywords) {
    if (k.term == r.hashtag) return "related keywords contain the topic hashtag";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Index

TopicIndexEntry index_entry(const TopicRecord& r) {
  TopicIndexEntry e{r.hashtag, r.day, r.score.display_score, r.score.rwc_raw,
                    r.graph.num_vertices(), {}};
  for (const Keyword& k : r.summary.related_keywords) e.keywords.push_back(k.term);
  return e;
}

json to_json(const TopicIndexEntry& e) {
  return {{"hashtag", e.hashtag},
          {"day", e.day.to_string()},
          {"display_score", e.display_score},
          {"rwc_raw", e.rwc_raw},
          {"vertices", e.vertices},
          {"keywords", e.keywords}};
}

TopicIndexEntry index_entry_from_json(const json& j) {
  auto day = Day::parse(j.at("day").get<std::string>());
  if (!day) throw Error(Errc::kCorruptRecord, "bad day in index entry");
  return {j.at("hashtag").get<std::string>(),
          *day,
          j.at("display_score").get<double>(),
          j.at("rwc_raw").get<double>(),
          j.at("vertices").get<size_t>(),
          j.at("keywords").get<std::vector<std::string>>()};
}

std::optional<SortKey> parse_sort_key(std::string_view text) {
  if (text == "score") return SortKey::kScore;
  if (text == "date") return SortKey::kDate;
  return std::nullopt;
}

std::string_view sort_key_name(SortKey key) { return key == SortKey::kScore ? "score" : "date"; }

QueryPage query_index(std::span<const TopicIndexEntry> entries, const TopicQuery& query) {
  const std::string needle = fold_case(query.text);
  std::vector<const TopicIndexEntry*> matches;
  for (const TopicIndexEntry& e : entries) {
    bool hit = needle.empty() || e.hashtag.find(needle) != std::string::npos;
    for (size_t i = 0; !hit && i < e.keywords.size(); ++i) {
      hit = fold_case(e.keywords[i]).find(needle) != std::string::npos;
    }
    if (hit) matches.push_back(&e);
  }
  auto by_score = [](const TopicIndexEntry* a, const TopicIndexEntry* b) {
    if (a->display_score != b->display_score) return a->display_score > b->display_score;
    if (a->day != b->day) return a->day > b->day;
    return a->hashtag < b->hashtag;
  };
  auto by_date = [](const TopicIndexEntry* a, const TopicIndexEntry* b) {
    if (a->day != b->day) return a->day > b->day;
    if (a->display_score != b->display_score) return a->display_score > b->display_score;
    return a->hashtag < b->hashtag;
  };
  if (query.sort == SortKey::kScore) {
    std::sort(matches.begin(), matches.end(), by_score);
  } else {
    std::sort(matches.begin(), matches.end(), by_date);
  }
  QueryPage page;
  page.total = matches.size();
  const size_t size = std::max<size_t>(1, query.page_size);
  if (query.page < (matches.size() + size - 1) / size) {
    const size_t begin = query.page * size;
    const size_t end = std::min(matches.size(), begin + size);
    for (size_t i = begin; i < end; ++i) page.entries.push_back(*matches[i]);
  }
  return page;
}

std::string encode_hashtag(std::string_view hashtag) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : hashtag) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

namespace {

[[noreturn]] void io_failure(const std::string& what, int err) {
  if (err == ENOSPC || err == EDQUOT) {
    throw Error(Errc::kStorageFull, what + ": " + std::strerror(err));
  }
  throw Error(Errc::kIoError, what + ": " + std::strerror(err));
}

// Write to a temp file in the same directory, fsync, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) io_failure("create " + path.parent_path().string(), ec.value());
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_failure("open " + tmp.string(), errno);
  size_t written = 0;
  while (written < content.size()) {
    const ssize_t n = ::write(fd, content.data() + written, content.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      ::unlink(tmp.c_str());
      io_failure("write " + tmp.string(), err);
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    const int err = errno;
    ::unlink(tmp.c_str());
    io_failure("flush " + tmp.string(), err);
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    const int err = errno;
    ::unlink(tmp.c_str());
    io_failure("rename " + tmp.string(), err);
  }
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string serialize(const json& doc) { return doc.dump(2) + "\n"; }

bool entry_less(const TopicIndexEntry& a, const TopicIndexEntry& b) {
  return a.day != b.day ? a.day < b.day : a.hashtag < b.hashtag;
}

// Parses and validates a record document.
TopicRecord load_record(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(Errc::kCorruptRecord, "record is not valid JSON");
  TopicRecord record = topic_record_from_json(doc);
  if (auto problem = validate(record)) throw Error(Errc::kCorruptRecord, *problem);
  return record;
}

}  // namespace

TopicStore::TopicStore(std::filesystem::path root, Mode mode)
    : root_(std::move(root)), mode_(mode) {
  if (mode_ == Mode::kReadWrite) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / "topics", ec);
    if (ec) io_failure("create " + (root_ / "topics").string(), ec.value());
  }
  if (!load_index()) rebuild_index();
}

std::filesystem::path TopicStore::record_path(Day day, std::string_view hashtag) const {
  return root_ / "topics" / day.to_string() / (encode_hashtag(hashtag) + ".json");
}

bool TopicStore::load_index() {
  auto text = read_file(root_ / "index.json");
  if (!text) return false;
  json doc = json::parse(*text, nullptr, false);
  try {
    if (doc.is_discarded() || doc.at("schema_version").get<int>() != kSchemaVersion) {
      spdlog::warn("index {} unreadable; rebuilding", (root_ / "index.json").string());
      return false;
    }
    std::vector<TopicIndexEntry> entries;
    for (const json& e : doc.at("entries")) entries.push_back(index_entry_from_json(e));
    std::sort(entries.begin(), entries.end(), entry_less);
    entries_ = std::move(entries);
    return true;
  } catch (const std::exception& e) {
    spdlog::warn("index {} invalid ({}); rebuilding", (root_ / "index.json").string(), e.what());
    return false;
  }
}

void TopicStore::write_index() const {
  if (mode_ == Mode::kReadOnly) return;
  json entries = json::array();
  for (const auto& e : entries_) entries.push_back(to_json(e));
  write_file_atomic(root_ / "index.json",
                    serialize({{"schema_version", kSchemaVersion}, {"entries", entries}}));
}

TopicStore::PutOutcome TopicStore::put(const TopicRecord& record) {
  if (mode_ == Mode::kReadOnly) throw Error(Errc::kInvalidArgument, "store is read-only");
  if (auto problem = validate(record)) throw Error(Errc::kValidationFailed, *problem);
  const std::string text = serialize(to_json(record));
  const std::filesystem::path path = record_path(record.day, record.hashtag);
  const TopicIndexEntry entry = index_entry(record);
  auto slot = std::lower_bound(entries_.begin(), entries_.end(), entry, entry_less);
  const bool indexed = slot != entries_.end() && slot->day == entry.day &&
                       slot->hashtag == entry.hashtag;

  PutOutcome outcome = PutOutcome::kCreated;
  auto existing = read_file(path);
  if (existing && *existing == text) {
    outcome = PutOutcome::kUnchanged;
  } else {
    if (existing) {
      outcome = PutOutcome::kOverwritten;
      spdlog::warn("overwriting topic {} {} with different content", record.day.to_string(),
                   record.hashtag);
    }
    write_file_atomic(path, text);
  }
  if (indexed && *slot == entry) return outcome;
  if (indexed) {
    *slot = entry;
  } else {
    entries_.insert(slot, entry);
  }
  write_index();
  return outcome;
}

std::string TopicStore::get_document(Day day, std::string_view hashtag) const {
  const std::filesystem::path path = record_path(day, hashtag);
  auto text = read_file(path);
  if (!text) {
    throw Error(Errc::kNotFound, "no topic " + std::string(hashtag) + " on " + day.to_string());
  }
  TopicRecord record = load_record(*text);
  if (record.day != day || record.hashtag != hashtag) {
    throw Error(Errc::kCorruptRecord, "record key does not match its path");
  }
  return *text;
}

TopicRecord TopicStore::get(Day day, std::string_view hashtag) const {
  return load_record(get_document(day, hashtag));
}

TopicStore::RebuildReport TopicStore::rebuild_index() {
  RebuildReport report;
  std::vector<TopicIndexEntry> entries;
  const std::filesystem::path topics = root_ / "topics";
  std::error_code ec;
  if (std::filesystem::is_directory(topics, ec)) {
    std::vector<std::filesystem::path> files;
    for (const auto& item : std::filesystem::recursive_directory_iterator(topics, ec)) {
      if (item.is_regular_file() && item.path().extension() == ".json") {
        files.push_back(item.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        auto text = read_file(file);
        if (!text) throw Error(Errc::kCorruptRecord, "unreadable");
        TopicRecord record = load_record(*text);
        if (record_path(record.day, record.hashtag) != file) {
          throw Error(Errc::kCorruptRecord, "record key does not match its path");
        }
        entries.push_back(index_entry(record));
      } catch (const Error& e) {
        spdlog::warn("skipping {}: {}", file.string(), e.what());
        report.skipped.push_back(file);
      }
    }
  }
  std::sort(entries.begin(), entries.end(), entry_less);
  entries_ = std::move(entries);
  report.indexed = entries_.size();
  write_index();
  return report;
}

TopicStore::VerifyReport TopicStore::verify() const {
  VerifyReport report;
  // The in-memory index may have been rebuilt on open; check the file too.
  if (auto text = read_file(root_ / "index.json")) {
    json doc = json::parse(*text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || doc.value("schema_version", 0) != kSchemaVersion) {
      report.problems.push_back("index.json: unreadable");
    }
  } else {
    report.problems.push_back("index.json: missing");
  }
  for (const TopicIndexEntry& entry : entries_) {
    ++report.checked;
    const std::string key = entry.day.to_string() + "/" + entry.hashtag;
    try {
      TopicRecord record = get(entry.day, entry.hashtag);
      if (!(index_entry(record) == entry)) {
        report.problems.push_back(key + ": index entry differs from record");
      }
    } catch (const Error& e) {
      report.problems.push_back(key + ": " + std::string(errc_name(e.code())) + " " + e.what());
    }
  }
  std::error_code ec;
  const std::filesystem::path topics = root_ / "topics";
  if (std::filesystem::is_directory(topics, ec)) {
    for (const auto& item : std::filesystem::recursive_directory_iterator(topics, ec)) {
      if (!item.is_regular_file() || item.path().extension() != ".json") continue;
      const bool known = std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) {
        return record_path(e.day, e.hashtag) == item.path();
      });
      if (!known) report.problems.push_back(item.path().string() + ": not in index");
    }
  }
  return report;
}

}  // namespace polar
