#include "fijord/report.hpp"

namespace fijord {

std::string coords_text(const std::vector<Residue>& coords) {
  std::string out = "[";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(coords[i]);
  }
  out += ']';
  return out;
}

void ReportBuilder::header(const std::string& key, const std::string& value) {
  lines_.push_back(key + " " + value);
}

void ReportBuilder::note(const std::string& text) { lines_.push_back("NOTE " + text); }

void ReportBuilder::add(const CheckResult& check) {
  ++checks_;
  if (check.passed) {
    lines_.push_back("CHECK " + check.name + " PASS");
  } else {
    ++failed_;
    lines_.push_back("CHECK " + check.name + " FAIL witness: " + check.witness);
  }
}

void ReportBuilder::add_all(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) add(c);
}

void ReportBuilder::verdict(const VerdictLine& v) {
  lines_.push_back("VERDICT " + v.name + ": " + v.value);
}

void ReportBuilder::verdict(const std::string& name, const std::string& value) {
  verdict(VerdictLine{name, value});
}

void ReportBuilder::abort(const std::string& text) { abort_ = text; }

std::string ReportBuilder::render() const {
  std::string out;
  for (const std::string& line : lines_) {
    out += line;
    out += '\n';
  }
  if (!abort_.empty()) {
    out += "RESULT ERROR " + abort_ + '\n';
    return out;
  }
  out += "RESULT ";
  out += (failed_ == 0 ? "PASS" : "FAIL");
  out += " checks=" + std::to_string(checks_) + " failed=" + std::to_string(failed_);
  out += '\n';
  return out;
}

}  // namespace fijord
