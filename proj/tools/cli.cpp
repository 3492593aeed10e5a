#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catana/analytics/growth.hpp"
#include "catana/analytics/studies.hpp"
#include "catana/cluster/dbscan.hpp"
#include "catana/cluster/hdbscan.hpp"
#include "catana/core/date.hpp"
#include "catana/core/embedding_container.hpp"
#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/popularity.hpp"
#include "catana/graph/graph.hpp"
#include "catana/graph/io.hpp"
#include "catana/graph/stats.hpp"
#include "catana/identity/frame_schedule.hpp"
#include "catana/identity/identity.hpp"
#include "catana/identity/io.hpp"
#include "catana/identity/pipeline.hpp"
#include "catana/ingest/crawl.hpp"
#include "catana/ingest/fetcher.hpp"
#include "catana/synth/world.hpp"
#include "config.hpp"

namespace catana::cli {

namespace fs = std::filesystem;

namespace {

struct Env {
  PipelineConfig cfg;
  fs::path data_dir;
  std::size_t threads = 1;
  std::ostream& out;
  std::ostream& err;

  fs::path at(const std::string& name) const { return data_dir / name; }
};

// Explicit path if given, else the named file under the data directory.
fs::path or_default(const std::string& given, const Env& env, const std::string& name) {
  return given.empty() ? env.at(name) : fs::path(given);
}

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_field(cells[i]);
  }
  return line + "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ContractError("cannot write " + path.string());
  f << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ContractError("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> growth_cells(const analytics::GrowthStats& s) {
  return {std::to_string(s.sample_count), fmt6(s.mean), fmt6(s.median), fmt6(s.p75),   fmt6(s.min),
          fmt6(s.max),                    fmt6(s.ci_low), fmt6(s.ci_high), fmt6(s.ci_level)};
}

std::vector<std::string> with_growth_header(std::vector<std::string> lead) {
  const auto& cols = analytics::growth_stats_columns();
  lead.insert(lead.end(), cols.begin(), cols.end());
  return lead;
}

// A directory holding snapshots.jsonl or the file itself.
analytics::SeriesMap load_series(const fs::path& p) {
  const auto file = fs::is_directory(p) ? p / "snapshots.jsonl" : p;
  return group_series(read_jsonl<SnapshotRow>(file));
}

graph::BuiltGraph load_graph(const fs::path& p) { return graph::from_graph_document(read_json_file(p)); }

std::map<std::string, Date> upload_dates(const std::vector<VideoRecord>& videos) {
  std::map<std::string, Date> out;
  for (const auto& v : videos) out[v.video_id] = v.upload_date;
  return out;
}

Date upload_of(const std::map<std::string, Date>& uploads, const std::string& video) {
  const auto it = uploads.find(video);
  if (it == uploads.end()) throw ContractError("collaboration video " + video + " is not in the video list");
  return it->second;
}

// Channel -> sorted distinct dates on which it hosted or guested.
std::map<std::string, std::vector<Date>> collab_dates(const graph::BuiltGraph& g,
                                                      const std::vector<VideoRecord>& videos) {
  const auto uploads = upload_dates(videos);
  std::map<std::string, std::set<Date>> sets;
  for (const auto& c : g.collaborations) {
    const Date d = upload_of(uploads, c.video_id);
    sets[c.origin].insert(d);
    sets[c.destination].insert(d);
  }
  std::map<std::string, std::vector<Date>> out;
  for (const auto& [ch, s] : sets) out[ch] = {s.begin(), s.end()};
  return out;
}

std::vector<std::string> read_id_lines(const fs::path& p) {
  std::vector<std::string> ids;
  std::istringstream in(read_text(p));
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(b, e - b + 1));
  }
  return ids;
}

struct FetcherOptions {
  std::string kind = "fixture";
  std::string base_url;
  std::string fixture_dir;
  double rate_limit = 0;
};

std::unique_ptr<ingest::Fetcher> make_fetcher(const FetcherOptions& o, const Env& env) {
  if (o.kind == "http") {
    if (o.base_url.empty()) throw CLI::ValidationError("--base-url", "required with --fetcher http");
    return std::make_unique<ingest::HttpFetcher>(o.base_url, o.rate_limit);
  }
  return ingest::FixtureFetcher::from_directory(or_default(o.fixture_dir, env, "fixture"));
}

// ---- ingest ----

void cmd_populate(const Env& env, const std::string& seeds, int depth, const FetcherOptions& fo) {
  auto fetcher = make_fetcher(fo, env);
  const auto result = ingest::populate({read_id_lines(seeds), depth, env.threads}, *fetcher);
  write_jsonl(env.at("channels.jsonl"), result.channels);
  write_jsonl(env.at("videos.jsonl"), result.videos);
  for (const auto& s : result.skipped) env.err << "skipped " << s.id << ": " << s.reason << "\n";
  env.out << "populated " << result.channels.size() << " channels, " << result.videos.size() << " videos, "
          << result.skipped.size() << " skipped\n";
}

void cmd_daily(const Env& env, const std::string& store, const std::string& date, const FetcherOptions& fo) {
  auto fetcher = make_fetcher(fo, env);
  const Date d = date.empty() ? today_utc() : parse_date(date);
  const auto dir = store.empty() ? env.data_dir : fs::path(store);
  const auto r = ingest::daily_snapshot(dir, *fetcher, d, env.threads);
  for (const auto& f : r.failures) env.err << "no snapshot for " << f.id << ": " << f.reason << "\n";
  env.out << format_date(d) << ": " << r.rows_written << " rows, " << r.new_videos.size() << " new videos, "
          << r.failures.size() << " failures\n";
}

void cmd_seeds(const Env& env, const std::string& members, std::size_t per_mcn, std::size_t top,
               const std::string& out) {
  auto cfg = ingest::members_from_json(read_json_file(members));
  cfg.sample_size_per_mcn = per_mcn;
  cfg.top_k_forced = top;
  cfg.rng_seed = env.cfg.rng_seed;
  const auto sel = ingest::select_seeds(cfg);
  for (const auto& w : sel.warnings) env.err << "warning: " << w << "\n";
  std::string text;
  for (const auto& id : sel.ids) text += id + "\n";
  write_text(or_default(out, env, "seeds.txt"), text);
  env.out << "selected " << sel.ids.size() << " seed channels from " << sel.per_mcn.size() << " networks\n";
}

// ---- pipeline ----

void cmd_plan(const Env& env, const std::string& videos, const std::string& out) {
  const identity::FrameScheduleConfig fc{env.cfg.frames_per_minute, env.cfg.f_min, env.cfg.f_max};
  std::vector<json> rows;
  for (const auto& v : read_jsonl<VideoRecord>(or_default(videos, env, "videos.jsonl"))) {
    const auto s = identity::plan_frames(v.frame_count, v.frame_rate, fc, v.video_id);
    rows.push_back({{"video_id", s.video_id}, {"n", s.n}, {"r", s.r}, {"count", s.indices.size()},
                    {"indices", s.indices}});
  }
  write_jsonl(or_default(out, env, "frames.jsonl"), rows);
  env.out << "planned frames for " << rows.size() << " videos\n";
}

identity::VideoClusterParams cluster_params(const PipelineConfig& c) {
  return {c.min_cluster_size, c.min_samples, c.p_filter, c.k_rep};
}

void cmd_cluster(const Env& env, const std::string& embeddings, const std::string& out) {
  const auto dir = or_default(embeddings, env, "embeddings");
  if (!fs::is_directory(dir)) throw ContractError("embeddings directory " + dir.string() + " does not exist");
  std::vector<VideoRecord> videos;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ctem") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    VideoRecord v;
    v.video_id = f.stem().string();
    videos.push_back(std::move(v));
  }
  const auto base = identity::directory_loader(dir);
  const auto want = env.cfg.D;
  const identity::EmbeddingLoader load = [&](const std::string& id) {
    auto file = base(id);
    if (file && want && file->dim != *want) {
      throw ContractError(id + ".ctem has dimension " + std::to_string(file->dim) + ", expected " + std::to_string(*want));
    }
    return file;
  };
  const auto corpus = identity::cluster_corpus(videos, load, cluster_params(env.cfg), env.threads);
  std::vector<json> rows;
  std::size_t fallback = 0;
  for (const auto& c : corpus.clusters) {
    rows.push_back(identity::cluster_to_json(c, static_cast<std::uint32_t>(c.centroid.size())));
    if (c.algorithm == identity::ClusterAlgorithm::dbscan) ++fallback;
  }
  write_jsonl(or_default(out, env, "clusters.jsonl"), rows);
  env.out << "clustered " << videos.size() << " videos into " << rows.size() << " face clusters (" << fallback
          << " via dbscan fallback)\n";
}

void cmd_link(const Env& env, const std::string& clusters_path, const std::string& videos_path,
              const std::string& out) {
  std::vector<identity::FaceCluster> clusters;
  for (const auto& j : read_jsonl<json>(or_default(clusters_path, env, "clusters.jsonl"))) {
    clusters.push_back(identity::cluster_from_json(j));
  }
  const auto videos = read_jsonl<VideoRecord>(or_default(videos_path, env, "videos.jsonl"));
  std::vector<json> rows;
  std::size_t count = 0;
  if (!clusters.empty()) {
    const identity::LinkParams lp{env.cfg.link_min_cluster_size, env.cfg.link_min_samples, true};
    for (const auto& p : identity::link_identities(clusters, identity::make_catalogue(videos), lp)) {
      rows.push_back(identity::identity_to_json(p));
      ++count;
    }
  }
  write_jsonl(or_default(out, env, "identities.jsonl"), rows);
  env.out << "linked " << clusters.size() << " face clusters into " << count << " identities\n";
}

// ---- graph ----

void cmd_graph_build(const Env& env, const std::string& identities, const std::string& videos,
                     const std::string& out) {
  std::vector<identity::Identity> people;
  for (const auto& j : read_jsonl<json>(or_default(identities, env, "identities.jsonl"))) {
    people.push_back(identity::identity_from_json(j));
  }
  const auto vids = read_jsonl<VideoRecord>(or_default(videos, env, "videos.jsonl"));
  const auto built = graph::build_graph(people, vids);
  write_json_file(or_default(out, env, "graph.json"), graph::to_graph_document(built));
  env.out << "graph: " << built.graph.nodes().size() << " channels, " << built.graph.edges().size()
          << " edges, " << built.graph.total_weight() << " collaborations\n";
}

void cmd_graph_filter(const Env& env, const std::string& channels, const std::string& graph_path, bool mutual,
                      bool lcc, const std::string& out) {
  if (!graph_path.empty()) {
    if (mutual) throw CLI::ValidationError("--mutual", "applies to featured lists, not to --graph");
    auto built = load_graph(graph_path);
    if (lcc) {
      built.graph = graph::largest_connected_component(built.graph);
      std::erase_if(built.collaborations, [&](const graph::Collaboration& c) {
        return !built.graph.nodes().count(c.origin) || !built.graph.nodes().count(c.destination);
      });
    }
    write_json_file(or_default(out, env, "graph_filtered.json"), graph::to_graph_document(built));
    env.out << "kept " << built.graph.nodes().size() << " channels\n";
    return;
  }
  const auto chans = read_jsonl<ChannelRecord>(or_default(channels, env, "channels.jsonl"));
  auto g = mutual ? graph::mutual_featured_subgraph(chans) : graph::featured_graph(chans);
  if (lcc) g = graph::largest_connected_component(g);
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.first, e.second});
  write_json_file(or_default(out, env, "candidates.json"), json{{"nodes", g.nodes()}, {"edges", edges}});
  env.out << "kept " << g.nodes().size() << " candidate channels, " << g.edges().size() << " links\n";
}

void cmd_graph_stats(const Env& env, const std::string& graph_path, const std::string& channels,
                     const std::string& out, const std::string& summary_out) {
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto chans = read_jsonl<ChannelRecord>(or_default(channels, env, "channels.jsonl"));
  const auto stats = graph::channel_stats(built.graph, chans);
  std::string text = csv_row({"channel_id", "internal", "external", "video_count", "ratio"});
  std::vector<double> internal, external, ratio;
  for (const auto& s : stats) {
    text += csv_row({s.channel_id, std::to_string(s.internal), std::to_string(s.external),
                     std::to_string(s.video_count), s.ratio ? fmt6(*s.ratio) : ""});
    internal.push_back(static_cast<double>(s.internal));
    external.push_back(static_cast<double>(s.external));
    if (s.ratio) ratio.push_back(*s.ratio);
  }
  write_text(or_default(out, env, "stats.csv"), text);

  std::string summary = csv_row({"quantity", "count", "sum", "mean", "median", "p75", "min", "max"});
  auto add = [&](const std::string& name, const std::vector<double>& xs) {
    if (xs.empty()) return;
    const auto s = graph::summary_stats(xs);
    summary += csv_row({name, std::to_string(s.count), fmt6(s.sum), fmt6(s.mean), fmt6(s.median), fmt6(s.p75),
                        fmt6(s.min), fmt6(s.max)});
  };
  add("edge_weight", graph::edge_weights(built.graph));
  add("internal", internal);
  add("external", external);
  add("ratio", ratio);
  write_text(or_default(summary_out, env, "summary.csv"), summary);
  env.out << "stats for " << stats.size() << " channels\n";
}

std::map<std::string, std::string> labels_by(const std::string& by, const std::vector<ChannelRecord>& chans,
                                             const fs::path& snapshots) {
  if (by == "mcn") return graph::mcn_labels(chans);
  if (by == "category") return graph::category_labels(chans);
  return graph::popclass_labels(load_series(snapshots));
}

void cmd_graph_matrix(const Env& env, const std::string& graph_path, const std::string& channels,
                      const std::string& snapshots, const std::string& by, const std::string& mode,
                      const std::string& out) {
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto chans = read_jsonl<ChannelRecord>(or_default(channels, env, "channels.jsonl"));
  const auto labels = labels_by(by, chans, or_default(snapshots, env, "snapshots.jsonl"));
  const auto m = graph::group_matrix(built.graph, labels,
                                     mode == "percent" ? graph::MatrixMode::row_percent : graph::MatrixMode::count);
  std::vector<std::string> header{"origin"};
  header.insert(header.end(), m.groups.begin(), m.groups.end());
  std::string text = csv_row(header);
  for (std::size_t i = 0; i < m.groups.size(); ++i) {
    std::vector<std::string> row{m.groups[i]};
    for (double v : m.values[i]) {
      row.push_back(mode == "percent" ? fmt6(v) : std::to_string(static_cast<std::uint64_t>(v)));
    }
    text += csv_row(row);
  }
  write_text(or_default(out, env, "matrix.csv"), text);
  env.out << m.groups.size() << "x" << m.groups.size() << " matrix by " << by << "\n";
}

void cmd_graph_export(const Env& env, const std::string& graph_path, const std::string& format,
                      const std::string& out) {
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto f = graph::parse_format(format);
  const std::string ext = format == "json" ? "adjacency.json" : format;
  write_text(or_default(out, env, "graph." + ext), graph::export_graph(built.graph, f));
  env.out << "exported " << built.graph.edges().size() << " edges as " << format << "\n";
}

// ---- analyze ----

void cmd_analyze_videos(const Env& env, const std::string& graph_path, const std::string& videos_path,
                        const std::string& snapshots, const std::string& out) {
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto videos = read_jsonl<VideoRecord>(or_default(videos_path, env, "videos.jsonl"));
  const auto series = load_series(or_default(snapshots, env, "snapshots.jsonl"));
  std::set<std::string> collab;
  for (const auto& c : built.collaborations) collab.insert(c.video_id);
  const auto g = analytics::video_growth(videos, series, collab, env.cfg.video_window_days);
  std::string text = csv_row(with_growth_header({"series"}));
  auto add = [&](const std::string& name, const std::vector<double>& xs) {
    if (xs.size() < 2) return;
    auto row = growth_cells(analytics::growth_stats(xs, env.cfg.ci_level));
    row.insert(row.begin(), name);
    text += csv_row(row);
  };
  add("collab_max_views", g.collab_maxima);
  add("non_collab_max_views", g.non_collab_maxima);
  add("collab_gradients", g.collab_gradients);
  add("non_collab_gradients", g.non_collab_gradients);
  add("channel_growth_pct", g.factors());
  write_text(or_default(out, env, "video_stats.csv"), text);
  env.out << "video growth: " << g.channel_factors.size() << " channels with both kinds of video, "
          << g.excluded_videos << " videos excluded\n";
}

void cmd_analyze_channels(const Env& env, const std::string& graph_path, const std::string& videos_path,
                          const std::string& snapshots, const std::string& out) {
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto videos = read_jsonl<VideoRecord>(or_default(videos_path, env, "videos.jsonl"));
  const auto series = load_series(or_default(snapshots, env, "snapshots.jsonl"));
  const auto dates = collab_dates(built, videos);

  std::string text = csv_row(with_growth_header({"study", "day", "metric"}));
  std::vector<analytics::ChannelTimeline> timelines;
  for (const auto& [ch, ds] : dates) {
    const auto it = series.find(ch);
    if (it == series.end()) continue;
    timelines.push_back({ch, it->second, ds});
  }
  for (auto m : {analytics::Metric::subscribers, analytics::Metric::views}) {
    std::vector<double> growth;
    for (const auto& t : timelines) {
      const auto split = analytics::subscriber_window_split(t.series, t.collab_dates, env.cfg.collab_window_days, m);
      const auto base = analytics::mean_of_deltas(split.non_collab);
      const auto with = analytics::mean_of_deltas(split.collab);
      if (!base || !with) continue;
      if (const auto g = analytics::pct_growth(*base, *with)) growth.push_back(*g);
    }
    if (growth.size() < 2) continue;
    auto row = growth_cells(analytics::growth_stats(growth, env.cfg.ci_level));
    row.insert(row.begin(), {"window", "", analytics::to_string(m)});
    text += csv_row(row);
  }
  for (const auto& r : analytics::effect_horizon(timelines, env.cfg.effect_horizon_days, env.cfg.ci_level)) {
    auto row = growth_cells(r.stats);
    row.insert(row.begin(), {"effect", r.day, analytics::to_string(r.metric)});
    text += csv_row(row);
  }
  write_text(or_default(out, env, "channel_stats.csv"), text);
  env.out << "channel growth over " << timelines.size() << " collaborating channels\n";
}

void cmd_analyze_impact(const Env& env, const std::string& graph_path, const std::string& channels,
                        const std::string& videos_path, const std::string& snapshots, const std::string& by,
                        const std::string& out) {
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto chans = read_jsonl<ChannelRecord>(or_default(channels, env, "channels.jsonl"));
  const auto videos = read_jsonl<VideoRecord>(or_default(videos_path, env, "videos.jsonl"));
  const auto snap_path = or_default(snapshots, env, "snapshots.jsonl");
  const auto series = load_series(snap_path);
  const auto labels = labels_by(by, chans, snap_path);
  const auto uploads = upload_dates(videos);

  std::map<std::string, std::vector<Date>> calendars;
  for (const auto& v : videos) calendars[v.channel_id].push_back(v.upload_date);
  std::vector<analytics::CollabEvent> events;
  for (const auto& c : built.collaborations) events.push_back({c.origin, c.destination, upload_of(uploads, c.video_id)});

  analytics::ImpactInputs in;
  in.channel_series = &series;
  in.uploads = &calendars;
  in.labels = &labels;
  in.window = env.cfg.collab_window_days;
  in.level = env.cfg.ci_level;
  std::string text = csv_row(with_growth_header({"guest_group", "host_group", "side", "metric"}));
  const auto rows = analytics::impact_by_group(events, in);
  for (const auto& r : rows) {
    auto row = growth_cells(r.stats);
    row.insert(row.begin(), {r.guest_group, r.host_group, r.side, analytics::to_string(r.metric)});
    text += csv_row(row);
  }
  write_text(or_default(out, env, "impact.csv"), text);
  env.out << rows.size() << " impact rows from " << events.size() << " collaborations\n";
}

// ---- bench ----

void cmd_bench_gen(const Env& env, const std::string& spec_path, const std::string& out) {
  json j = spec_path.empty() ? json::object() : read_json_file(spec_path);
  if (!j.is_object()) throw ContractError("world spec must be a JSON object");
  if (!j.contains("rng_seed")) j["rng_seed"] = env.cfg.rng_seed;
  synth::WorldSpec spec;
  try {
    spec = j.get<synth::WorldSpec>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("world spec: ") + e.what());
  }
  const auto dir = out.empty() ? env.data_dir : fs::path(out);
  const auto world = synth::generate_world(spec);
  synth::write_world(world, dir);
  env.out << "generated " << world.channels.size() << " channels, " << world.videos.size() << " videos, "
          << world.truth.collaboration_count << " planted collaborations in " << dir.string() << "\n";
}

void cmd_bench_score(const Env& env, const std::string& truth_dir, const std::string& graph_path,
                     const std::string& out) {
  const auto dir = truth_dir.empty() ? env.data_dir : fs::path(truth_dir);
  const auto truth = synth::truth_from_json(read_json_file(dir / "truth.json"));
  const auto built = load_graph(or_default(graph_path, env, "graph.json"));
  const auto s = synth::score_recovery(truth.edges, built.graph);
  const json j{{"precision", s.precision},         {"recall", s.recall},
               {"weight_error", s.weight_error},   {"true_positives", s.true_positives},
               {"false_positives", s.false_positives}, {"false_negatives", s.false_negatives}};
  if (out.empty()) {
    env.out << j.dump(2) << "\n";
  } else {
    write_json_file(out, j);
    env.out << "precision " << fmt6(s.precision) << ", recall " << fmt6(s.recall) << "\n";
  }
}

// ---- cluster run ----

cluster::PointSet read_points(const fs::path& p) {
  if (p.extension() == ".ctem") {
    const auto file = read_embeddings(p);
    std::vector<double> values(file.values.begin(), file.values.end());
    return cluster::PointSet(std::move(values), file.dim);
  }
  std::istringstream in(read_text(p));
  std::string line;
  std::vector<double> values;
  std::size_t dim = 0, row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') continue;
    std::istringstream cells(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ContractError(p.string() + ":" + std::to_string(row) + ": not a number: '" + cell + "'");
      }
      ++n;
    }
    if (dim == 0) dim = n;
    if (n != dim) throw ContractError(p.string() + ":" + std::to_string(row) + ": expected " + std::to_string(dim) + " values");
  }
  return cluster::PointSet(std::move(values), dim);
}

void cmd_cluster_run(const Env& env, const std::string& input, const std::string& algo,
                     const cluster::ClusterParams& params, const std::string& out) {
  const auto pts = read_points(input);
  const cluster::EuclideanDistance dist(pts);
  const auto r = pts.size() == 0 ? cluster::ClusterResult{}
                 : algo == "dbscan"
                     ? cluster::dbscan(dist, params.eps, params.min_pts)
                     : cluster::hdbscan(dist, params);
  std::string text = csv_row({"index", "label", "probability"});
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    text += csv_row({std::to_string(i), std::to_string(r.labels[i]), fmt6(r.probabilities[i])});
  }
  if (out.empty()) {
    env.out << text;
  } else {
    write_text(out, text);
    env.out << r.cluster_count() << " clusters over " << r.labels.size() << " points\n";
  }
}

// ---- run-all ----

void validate_store(const Env& env) {
  const auto chans = read_jsonl<ChannelRecord>(env.at("channels.jsonl"));
  const auto videos = read_jsonl<VideoRecord>(env.at("videos.jsonl"));
  const auto series = load_series(env.at("snapshots.jsonl"));
  std::set<std::string> channel_ids;
  for (const auto& c : chans) channel_ids.insert(c.channel_id);
  std::set<std::string> video_ids;
  for (const auto& v : videos) {
    video_ids.insert(v.video_id);
    if (!channel_ids.count(v.channel_id)) throw ContractError("video " + v.video_id + " belongs to unknown channel " + v.channel_id);
  }
  std::size_t violations = 0;
  for (const auto& [id, s] : series) {
    const auto kind = channel_ids.count(id) ? SubjectKind::channel
                      : video_ids.count(id) ? SubjectKind::video
                                            : SubjectKind::unknown;
    for (const auto& v : validate_series(s, kind)) {
      env.err << "warning: " << id << " " << format_date(v.date) << ": " << v.rule << "\n";
      ++violations;
    }
  }
  env.out << "store: " << chans.size() << " channels, " << videos.size() << " videos, " << series.size()
          << " series, " << violations << " series warnings\n";
}

void cmd_run_all(const Env& env) {
  validate_store(env);
  cmd_cluster(env, "", "");
  cmd_link(env, "", "", "");
  cmd_graph_build(env, "", "", "");
  cmd_graph_stats(env, "", "", "", "");
  cmd_graph_matrix(env, "", "", "", "category", "count", "");
  cmd_analyze_videos(env, "", "", "", "");
  cmd_analyze_channels(env, "", "", "", "");
  cmd_analyze_impact(env, "", "", "", "", "category", "");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"catana: collaboration analysis over channel metadata, face embeddings and popularity series",
               "catana"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, data_dir = ".";
  std::size_t threads = 1;
  app.add_option("--config", config_path, "JSON pipeline configuration; explicit flags win")->check(CLI::ExistingFile);
  app.add_option("--data-dir", data_dir, "Store root")->envname("CATANA_DATA_DIR")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  // Flags that override configuration keys.
  std::optional<std::uint64_t> rng_seed;
  std::optional<std::size_t> mcs, ms, k_rep, link_mcs, link_ms;
  std::optional<double> p_filter, ci_level;
  std::optional<int> window, horizon, video_days;

  std::string s_seeds, s_store, s_date, s_members, s_out, s_videos, s_embeddings, s_clusters, s_identities,
      s_graph, s_channels, s_snapshots, s_spec, s_truth, s_input, s_summary;
  std::string by = "category", mode = "count", format = "json", algo = "hdbscan";
  int depth = 0;
  std::size_t per_mcn = 1500, top = 100;
  bool mutual = false, lcc = false;
  FetcherOptions fo;
  cluster::ClusterParams cp;

  auto fetcher_flags = [&](CLI::App* sub) {
    sub->add_option("--fetcher", fo.kind, "Fetcher implementation")
        ->check(CLI::IsMember({"fixture", "http"}))
        ->capture_default_str();
    sub->add_option("--base-url", fo.base_url, "HTTP fetcher base URL");
    sub->add_option("--fixture", fo.fixture_dir, "Fixture fetcher directory (default <data-dir>/fixture)");
    sub->add_option("--rate-limit", fo.rate_limit, "HTTP requests per second (0 = unlimited)");
  };

  auto* ingest = app.add_subcommand("ingest", "Crawl channel metadata and daily snapshots");
  ingest->require_subcommand(1);
  auto* populate = ingest->add_subcommand("populate", "Breadth-first expansion over featured channels");
  populate->add_option("--seeds", s_seeds, "File with one seed channel id per line")->required();
  populate->add_option("--depth", depth, "Expansion depth")->check(CLI::NonNegativeNumber)->capture_default_str();
  fetcher_flags(populate);
  auto* daily = ingest->add_subcommand("daily", "Record one day of snapshots");
  daily->add_option("--store", s_store, "Store directory (default <data-dir>)");
  daily->add_option("--date", s_date, "Snapshot date YYYY-MM-DD (default today, UTC)");
  fetcher_flags(daily);
  auto* seeds = ingest->add_subcommand("seeds", "Select seed channels from network member lists");
  seeds->add_option("--members", s_members, "JSON member lists per network")->required();
  seeds->add_option("--per-mcn", per_mcn, "Sample size per network")->capture_default_str();
  seeds->add_option("--top", top, "Top channels by subscribers always included")->capture_default_str();
  seeds->add_option("--rng-seed", rng_seed, "Sampling seed");
  seeds->add_option("--out", s_out, "Output file (default <data-dir>/seeds.txt)");

  auto* pipeline = app.add_subcommand("pipeline", "Face clustering and identity linking");
  pipeline->require_subcommand(1);
  auto* plan = pipeline->add_subcommand("plan", "Frame extraction schedule per video");
  plan->add_option("--videos", s_videos, "videos.jsonl");
  plan->add_option("--out", s_out, "frames.jsonl");
  auto* pcluster = pipeline->add_subcommand("cluster", "Cluster faces within every video");
  pcluster->add_option("--embeddings", s_embeddings, "Directory of <video>.ctem containers");
  pcluster->add_option("--out", s_out, "clusters.jsonl");
  pcluster->add_option("--min-cluster-size", mcs);
  pcluster->add_option("--min-samples", ms);
  pcluster->add_option("--p-filter", p_filter);
  pcluster->add_option("--k-rep", k_rep);
  auto* plink = pipeline->add_subcommand("link", "Link face clusters into identities");
  plink->add_option("--clusters", s_clusters, "clusters.jsonl");
  plink->add_option("--videos", s_videos, "videos.jsonl");
  plink->add_option("--out", s_out, "identities.jsonl");
  plink->add_option("--link-min-cluster-size", link_mcs);
  plink->add_option("--link-min-samples", link_ms);

  auto* graphc = app.add_subcommand("graph", "Collaboration graph construction and statistics");
  graphc->require_subcommand(1);
  auto* gbuild = graphc->add_subcommand("build", "Build the directed collaboration graph");
  gbuild->add_option("--identities", s_identities, "identities.jsonl");
  gbuild->add_option("--videos", s_videos, "videos.jsonl");
  gbuild->add_option("--out", s_out, "graph.json");
  auto* gfilter = graphc->add_subcommand("filter", "Featured-list candidates or the largest component");
  gfilter->add_option("--channels", s_channels, "channels.jsonl");
  gfilter->add_option("--graph", s_graph, "Filter a collaboration graph instead of featured lists");
  gfilter->add_flag("--mutual", mutual, "Keep only mutual featured listings");
  gfilter->add_flag("--lcc", lcc, "Keep only the largest connected component");
  gfilter->add_option("--out", s_out, "Output JSON");
  auto* gstats = graphc->add_subcommand("stats", "Per-channel internal/external counts and summaries");
  gstats->add_option("--graph", s_graph, "graph.json");
  gstats->add_option("--channels", s_channels, "channels.jsonl");
  gstats->add_option("--out", s_out, "stats.csv");
  gstats->add_option("--summary", s_summary, "summary.csv");
  auto* gmatrix = graphc->add_subcommand("matrix", "Collaborations between groups");
  gmatrix->add_option("--graph", s_graph, "graph.json");
  gmatrix->add_option("--channels", s_channels, "channels.jsonl");
  gmatrix->add_option("--snapshots", s_snapshots, "Snapshot directory or file (popclass)");
  gmatrix->add_option("--by", by)->check(CLI::IsMember({"mcn", "category", "popclass"}))->capture_default_str();
  gmatrix->add_option("--mode", mode)->check(CLI::IsMember({"count", "percent"}))->capture_default_str();
  gmatrix->add_option("--out", s_out, "matrix.csv");
  auto* gexport = graphc->add_subcommand("export", "Write the graph as GraphML, JSON adjacency or DOT");
  gexport->add_option("--graph", s_graph, "graph.json");
  gexport->add_option("--format", format)->check(CLI::IsMember({"graphml", "json", "dot"}))->capture_default_str();
  gexport->add_option("--out", s_out, "Output file");

  auto* analyze = app.add_subcommand("analyze", "Popularity effects of collaborations");
  analyze->require_subcommand(1);
  auto* avideos = analyze->add_subcommand("videos", "12-day maxima and gradients, collab vs non-collab");
  avideos->add_option("--graph", s_graph, "graph.json");
  avideos->add_option("--videos", s_videos, "videos.jsonl");
  avideos->add_option("--snapshots", s_snapshots, "Snapshot directory or file");
  avideos->add_option("--days", video_days, "Video window length");
  avideos->add_option("--ci-level", ci_level);
  avideos->add_option("--out", s_out, "video_stats.csv");
  auto* achannels = analyze->add_subcommand("channels", "Subscriber and view growth around collaborations");
  achannels->add_option("--graph", s_graph, "graph.json");
  achannels->add_option("--videos", s_videos, "videos.jsonl");
  achannels->add_option("--snapshots", s_snapshots, "Snapshot directory or file");
  achannels->add_option("--window", window, "Days after a collaboration counted as collaboration");
  achannels->add_option("--horizon", horizon, "Days of effect reported");
  achannels->add_option("--ci-level", ci_level);
  achannels->add_option("--out", s_out, "channel_stats.csv");
  auto* aimpact = analyze->add_subcommand("impact", "Growth per guest group and host group");
  aimpact->add_option("--graph", s_graph, "graph.json");
  aimpact->add_option("--channels", s_channels, "channels.jsonl");
  aimpact->add_option("--videos", s_videos, "videos.jsonl");
  aimpact->add_option("--snapshots", s_snapshots, "Snapshot directory or file");
  aimpact->add_option("--by", by)->check(CLI::IsMember({"category", "popclass"}))->capture_default_str();
  aimpact->add_option("--window", window);
  aimpact->add_option("--ci-level", ci_level);
  aimpact->add_option("--out", s_out, "impact.csv");

  auto* bench = app.add_subcommand("bench", "Synthetic worlds with planted collaborations");
  bench->require_subcommand(1);
  auto* bgen = bench->add_subcommand("gen", "Generate a synthetic world");
  bgen->add_option("--spec", s_spec, "World spec JSON");
  bgen->add_option("--rng-seed", rng_seed, "Seed used when the --spec file sets no rng_seed");
  bgen->add_option("--out", s_out, "Output directory (default <data-dir>)");
  auto* bscore = bench->add_subcommand("score", "Score a detected graph against planted truth");
  bscore->add_option("--truth", s_truth, "Directory holding truth.json");
  bscore->add_option("--graph", s_graph, "graph.json");
  bscore->add_option("--out", s_out, "Write the score JSON here instead of stdout");

  auto* clusterc = app.add_subcommand("cluster", "Clustering primitives");
  clusterc->require_subcommand(1);
  auto* crun = clusterc->add_subcommand("run", "Cluster a point file and print labels as CSV");
  crun->add_option("--input", s_input, "CSV of points or a .ctem container")->required();
  crun->add_option("--algo", algo)->check(CLI::IsMember({"dbscan", "hdbscan"}))->capture_default_str();
  crun->add_option("--eps", cp.eps)->capture_default_str();
  crun->add_option("--min-pts", cp.min_pts)->capture_default_str();
  crun->add_option("--min-cluster-size", cp.min_cluster_size)->capture_default_str();
  crun->add_option("--min-samples", cp.min_samples)->capture_default_str();
  crun->add_flag("--allow-single-cluster", cp.allow_single_cluster);
  crun->add_option("--out", s_out, "Output CSV (default stdout)");

  auto* runall = app.add_subcommand("run-all", "Validate the store, then cluster, link, build the graph and analyze");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << "\n" << app.help();
    return 1;
  }

  try {
    PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (rng_seed) cfg.rng_seed = *rng_seed;
    if (mcs) cfg.min_cluster_size = *mcs;
    if (ms) cfg.min_samples = *ms;
    if (p_filter) cfg.p_filter = *p_filter;
    if (k_rep) cfg.k_rep = *k_rep;
    if (link_mcs) cfg.link_min_cluster_size = *link_mcs;
    if (link_ms) cfg.link_min_samples = *link_ms;
    if (ci_level) cfg.ci_level = *ci_level;
    if (window) cfg.collab_window_days = *window;
    if (horizon) cfg.effect_horizon_days = *horizon;
    if (video_days) cfg.video_window_days = *video_days;
    cfg.validate();
    const Env env{cfg, data_dir, threads, out, err};

    if (*populate) cmd_populate(env, s_seeds, depth, fo);
    else if (*daily) cmd_daily(env, s_store, s_date, fo);
    else if (*seeds) cmd_seeds(env, s_members, per_mcn, top, s_out);
    else if (*plan) cmd_plan(env, s_videos, s_out);
    else if (*pcluster) cmd_cluster(env, s_embeddings, s_out);
    else if (*plink) cmd_link(env, s_clusters, s_videos, s_out);
    else if (*gbuild) cmd_graph_build(env, s_identities, s_videos, s_out);
    else if (*gfilter) cmd_graph_filter(env, s_channels, s_graph, mutual, lcc, s_out);
    else if (*gstats) cmd_graph_stats(env, s_graph, s_channels, s_out, s_summary);
    else if (*gmatrix) cmd_graph_matrix(env, s_graph, s_channels, s_snapshots, by, mode, s_out);
    else if (*gexport) cmd_graph_export(env, s_graph, format, s_out);
    else if (*avideos) cmd_analyze_videos(env, s_graph, s_videos, s_snapshots, s_out);
    else if (*achannels) cmd_analyze_channels(env, s_graph, s_videos, s_snapshots, s_out);
    else if (*aimpact) cmd_analyze_impact(env, s_graph, s_channels, s_videos, s_snapshots, by, s_out);
    else if (*bgen) cmd_bench_gen(env, s_spec, s_out);
    else if (*bscore) cmd_bench_score(env, s_truth, s_graph, s_out);
    else if (*crun) cmd_cluster_run(env, s_input, algo, cp, s_out);
    else if (*runall) cmd_run_all(env);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const FetchError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"catana"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace catana::cli
