#pragma once

#include <string>
#include <vector>

namespace supersplit {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    void add(std::string name, bool pass, std::string detail = "") {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }
    bool ok() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
    std::string str() const {
        std::string s;
        for (const auto& c : checks) {
            s += (c.pass ? "pass  " : "FAIL  ") + c.name;
            if (!c.detail.empty()) s += ": " + c.detail;
            s += "\n";
        }
        return s;
    }
};

} // namespace supersplit
