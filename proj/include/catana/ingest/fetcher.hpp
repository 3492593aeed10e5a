#pragma once

#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/types.hpp"

namespace catana::ingest {

struct Stats {
  std::uint64_t views = 0;
  std::optional<std::uint64_t> subscribers;
  std::optional<std::uint64_t> comments;

  bool operator==(const Stats&) const = default;
};

inline void to_json(json& j, const Stats& s) {
  j = json{{"views", s.views}};
  if (s.subscribers) j["subscribers"] = *s.subscribers;
  if (s.comments) j["comments"] = *s.comments;
}

inline void from_json(const json& j, Stats& s) {
  s.views = j.at("views").get<std::uint64_t>();
  s.subscribers = j.contains("subscribers") && !j["subscribers"].is_null()
                      ? std::optional(j["subscribers"].get<std::uint64_t>())
                      : std::nullopt;
  s.comments = j.contains("comments") && !j["comments"].is_null()
                   ? std::optional(j["comments"].get<std::uint64_t>())
                   : std::nullopt;
}

// Read access to the platform. Implementations throw FetchError on failure
// and never invent data.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual ChannelRecord get_channel(const std::string& channel_id) = 0;
  virtual std::vector<VideoRecord> get_uploads(const std::string& channel_id) = 0;
  virtual Stats get_stats(const std::string& subject_id) = 0;
};

// In-memory fetcher; can be loaded from a directory holding channels.jsonl,
// videos.jsonl and stats.jsonl ({"subject_id", "views", ...} per line).
class FixtureFetcher : public Fetcher {
 public:
  void add_channel(ChannelRecord c) {
    std::lock_guard lock(mutex_);
    channels_[c.channel_id] = std::move(c);
  }

  void add_video(VideoRecord v) {
    std::lock_guard lock(mutex_);
    uploads_[v.channel_id].push_back(std::move(v));
  }

  void set_stats(const std::string& subject, Stats s) {
    std::lock_guard lock(mutex_);
    stats_[subject] = s;
  }

  void fail(const std::string& id) {
    std::lock_guard lock(mutex_);
    failing_.insert(id);
  }

  std::size_t request_count() const {
    std::lock_guard lock(mutex_);
    return requests_;
  }

  std::size_t channel_requests(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = channel_requests_.find(id);
    return it == channel_requests_.end() ? 0 : it->second;
  }

  void reset_counters() {
    std::lock_guard lock(mutex_);
    requests_ = 0;
    channel_requests_.clear();
  }

  static std::unique_ptr<FixtureFetcher> from_directory(const std::filesystem::path& dir) {
    auto f = std::make_unique<FixtureFetcher>();
    for (auto& c : read_jsonl<ChannelRecord>(dir / "channels.jsonl")) f->add_channel(std::move(c));
    if (std::filesystem::exists(dir / "videos.jsonl")) {
      for (auto& v : read_jsonl<VideoRecord>(dir / "videos.jsonl")) f->add_video(std::move(v));
    }
    if (std::filesystem::exists(dir / "stats.jsonl")) {
      for (const auto& row : read_jsonl<json>(dir / "stats.jsonl")) {
        f->set_stats(row.at("subject_id").get<std::string>(), row.get<Stats>());
      }
    }
    return f;
  }

  ChannelRecord get_channel(const std::string& id) override {
    std::lock_guard lock(mutex_);
    ++requests_;
    ++channel_requests_[id];
    check(id);
    const auto it = channels_.find(id);
    if (it == channels_.end()) throw FetchError("channel not found: " + id);
    return it->second;
  }

  std::vector<VideoRecord> get_uploads(const std::string& id) override {
    std::lock_guard lock(mutex_);
    ++requests_;
    check(id);
    if (!channels_.count(id)) throw FetchError("channel not found: " + id);
    const auto it = uploads_.find(id);
    return it == uploads_.end() ? std::vector<VideoRecord>{} : it->second;
  }

  Stats get_stats(const std::string& id) override {
    std::lock_guard lock(mutex_);
    ++requests_;
    check(id);
    const auto it = stats_.find(id);
    if (it == stats_.end()) throw FetchError("no stats for " + id);
    return it->second;
  }

 private:
  void check(const std::string& id) const {
    if (failing_.count(id)) throw FetchError("simulated failure for " + id);
  }

  mutable std::mutex mutex_;
  std::map<std::string, ChannelRecord> channels_;
  std::map<std::string, std::vector<VideoRecord>> uploads_;
  std::map<std::string, Stats> stats_;
  std::set<std::string> failing_;
  std::map<std::string, std::size_t> channel_requests_;
  std::size_t requests_ = 0;
};

// Token bucket: `rate` tokens per second, holding at most `burst`.
class RateLimiter {
 public:
  explicit RateLimiter(double rate, double burst = 1.0) : rate_(rate), burst_(std::max(1.0, burst)), tokens_(burst_) {
    if (!(rate > 0)) throw ContractError("rate limit must be positive");
    last_ = std::chrono::steady_clock::now();
  }

  void acquire() {
    std::unique_lock lock(mutex_);
    for (;;) {
      const auto now = std::chrono::steady_clock::now();
      tokens_ = std::min(burst_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
  }

 private:
  double rate_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

inline std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

// JSON over HTTP: GET /channel/{id}, /channel/{id}/uploads (array),
// /stats/{id}.
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(std::string base_url, double rate_limit = 0.0) : base_url_(std::move(base_url)) {
    if (rate_limit > 0) limiter_ = std::make_unique<RateLimiter>(rate_limit);
  }

  ChannelRecord get_channel(const std::string& id) override {
    return decode<ChannelRecord>(get("/channel/" + url_encode(id)), id);
  }

  std::vector<VideoRecord> get_uploads(const std::string& id) override {
    const auto j = get("/channel/" + url_encode(id) + "/uploads");
    if (!j.is_array()) throw FetchError("uploads for " + id + " is not an array");
    return decode<std::vector<VideoRecord>>(j, id);
  }

  Stats get_stats(const std::string& id) override { return decode<Stats>(get("/stats/" + url_encode(id)), id); }

 private:
  template <typename T>
  static T decode(const json& j, const std::string& id) {
    try {
      return j.get<T>();
    } catch (const json::exception& e) {
      throw FetchError("bad response for " + id + ": " + e.what());
    } catch (const ContractError& e) {
      throw FetchError("bad response for " + id + ": " + e.what());
    }
  }

  json get(const std::string& path) {
    if (limiter_) limiter_->acquire();
    httplib::Client client(base_url_);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    const auto res = client.Get(path);
    if (!res) throw FetchError("GET " + path + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw FetchError("GET " + path + ": HTTP " + std::to_string(res->status));
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw FetchError("GET " + path + ": " + e.what());
    }
  }

  std::string base_url_;
  std::unique_ptr<RateLimiter> limiter_;
};

}  // namespace catana::ingest
