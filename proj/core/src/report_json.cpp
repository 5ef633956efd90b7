#include <cmath>

#include <json.hpp>

#include "idsm/criteria.hpp"

namespace idsm {

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) {
    return x;
  }
  return nullptr;
}

}  // namespace

std::string report_to_json(const VerdictReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["verdict"] = to_string(report.verdict);
  doc["conditions"] = nlohmann::ordered_json::array();
  for (const auto& c : report.conditions) {
    nlohmann::ordered_json item;
    item["id"] = c.id;
    item["role"] = to_string(c.role);
    item["value"] = number(c.value);
    item["finite"] = c.finite;
    item["status"] = c.status;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const auto& [label, value] : c.per_label) {
      per[label] = number(value);
    }
    item["per_label"] = per;
    if (!c.note.empty()) {
      item["note"] = c.note;
    }
    if (!c.profile.empty()) {
      nlohmann::ordered_json prof = nlohmann::ordered_json::array();
      for (const auto& [u, r] : c.profile) {
        prof.push_back({{"u", u}, {"r", number(r)}});
      }
      item["profile"] = prof;
    }
    doc["conditions"].push_back(item);
  }
  doc["reasons"] = report.reasons;
  nlohmann::ordered_json special;
  special["evaluated"] = report.special.evaluated;
  special["flag"] = report.special.special;
  special["expected_drift"] = report.special.evaluated ? number(report.special.expected_drift)
                                                       : nlohmann::ordered_json(nullptr);
  if (!report.special.note.empty()) {
    special["note"] = report.special.note;
  }
  doc["special"] = special;
  return doc.dump(indent);
}

}  // namespace idsm
