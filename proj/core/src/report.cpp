#include "covalg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace covalg {

const char* const kToolVersion = "1.0.0";

void Report::add(std::string name, bool pass, double residual, std::string certificate) {
  checks.push_back({std::move(name), pass, residual, std::move(certificate)});
}

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

std::vector<const CheckResult*> by_name(const std::vector<CheckResult>& checks) {
  std::vector<const CheckResult*> v;
  v.reserve(checks.size());
  for (const auto& c : checks) v.push_back(&c);
  std::sort(v.begin(), v.end(),
            [](const CheckResult* a, const CheckResult* b) { return a->name < b->name; });
  return v;
}

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", r);
  return buf;
}

}  // namespace

std::string Report::to_json() const {
  nlohmann::ordered_json doc;
  doc["tool"] = "covalg";
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["input"] = input;
  doc["fingerprint"] = fingerprint;
  doc["seed"] = seed;
  auto arr = nlohmann::ordered_json::array();
  int passed = 0;
  for (const CheckResult* c : by_name(checks)) {
    nlohmann::ordered_json jc;
    jc["name"] = c->name;
    jc["status"] = c->pass ? "pass" : "fail";
    jc["residual"] = format_residual(c->residual);
    jc["certificate"] = c->certificate;
    arr.push_back(std::move(jc));
    if (c->pass) ++passed;
  }
  doc["checks"] = std::move(arr);
  doc["summary"] = {{"checks", checks.size()}, {"passed", passed}, {"ok", ok()}};
  return doc.dump(2) + "\n";
}

std::string Report::to_pretty() const {
  std::ostringstream out;
  out << "covalg " << kToolVersion << "  " << command << "  " << input << "\n";
  out << "fingerprint " << fingerprint << "  seed " << seed << "\n\n";

  size_t name_w = 5;
  for (const auto& c : checks) name_w = std::max(name_w, c.name.size());
  const std::string bar(name_w + 34, '-');
  out << "  " << std::string("check").append(name_w - 5, ' ') << "  status  residual      \n";
  out << "  " << bar << "\n";
  for (const CheckResult* c : by_name(checks)) {
    std::string name = c->name;
    name.append(name_w - name.size(), ' ');
    out << "  " << name << "  " << (c->pass ? "pass  " : "FAIL  ") << "  "
        << format_residual(c->residual);
    if (!c->certificate.empty()) out << "  " << c->certificate;
    out << "\n";
  }
  int passed = 0;
  for (const auto& c : checks) passed += c.pass ? 1 : 0;
  out << "\n  " << passed << "/" << checks.size() << " checks passed: "
      << (ok() ? "ok" : "FAILED") << "\n";
  return out.str();
}

}  // namespace covalg
