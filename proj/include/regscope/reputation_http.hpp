#pragma once

// HTTP reputation client, kept in its own header so the socket machinery is
// only compiled where it is actually used. Network lookups are strictly
// opt-in: nothing in the toolkit touches this unless a reputation URL is
// passed explicitly.

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include <httplib.h>

#include "regscope/errors.hpp"
#include "regscope/ingest.hpp"

namespace regscope {

// Queries GET <base_url>/<sample_id>; expects {"positives": n, "total": m}.
// 404 means "unknown sample" (nullopt); transport failures and malformed
// bodies throw so labeling never silently degrades.
class HttpReputationSource : public ReputationSource {
 public:
  explicit HttpReputationSource(const std::string& base_url) {
    // split scheme://host:port and an optional path prefix
    std::string rest = base_url;
    if (auto pos = rest.find("://"); pos != std::string::npos)
      rest = rest.substr(pos + 3);
    std::string host_port = rest;
    if (auto slash = rest.find('/'); slash != std::string::npos) {
      host_port = rest.substr(0, slash);
      prefix_ = rest.substr(slash);
      if (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }
    client_ = std::make_unique<httplib::Client>(
        (base_url.rfind("https://", 0) == 0 ? "https://" : "http://") +
        host_port);
    client_->set_connection_timeout(5, 0);
    client_->set_read_timeout(5, 0);
  }

  std::optional<ReputationVerdict> lookup(
      const std::string& sample_id) override {
    httplib::Result res = client_->Get(prefix_ + "/" + sample_id);
    if (!res)
      fail(ErrorCode::IoError,
           "reputation lookup failed: " + httplib::to_string(res.error()));
    if (res->status == 404) return std::nullopt;
    if (res->status != 200)
      fail(ErrorCode::IoError,
           "reputation lookup returned status " + std::to_string(res->status));
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error&) {
      fail(ErrorCode::MalformedReport, "reputation response is not JSON");
    }
    if (!doc.is_object() || !doc.contains("positives") ||
        !doc["positives"].is_number_integer())
      fail(ErrorCode::MalformedReport,
           "reputation response needs integer 'positives'");
    ReputationVerdict v;
    v.sample_id = sample_id;
    v.positives = doc["positives"].get<int>();
    v.total = doc.value("total", 0);
    return v;
  }

 private:
  std::unique_ptr<httplib::Client> client_;
  std::string prefix_;
};

}  // namespace regscope
