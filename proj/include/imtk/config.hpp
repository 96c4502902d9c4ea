#ifndef IMTK_CONFIG_HPP
#define IMTK_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "imtk/nonlin.hpp"
#include "imtk/spectrum.hpp"

namespace imtk {

/// Flat key = value configuration with dotted namespaces; '#' starts a
/// comment.  Unknown keys are rejected against the per-command allow list.
class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma separated

    /// Throws ValidationError naming the first unknown key.
    void restrict_keys(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }
    std::string canonical_text() const;  // sorted key=value lines, hashing input

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, int> lines_;
    std::string origin_;
};

/// operator.* keys -> model; operator.modes -> truncation count.
OperatorModel operator_from_config(const RunConfig& cfg);
std::size_t modes_from_config(const RunConfig& cfg);

/// nonlinearity.* keys -> model (may read a CSV table next to the config).
NonlinPtr nonlinearity_from_config(const RunConfig& cfg, const EigenvalueSequence& seq);

}  // namespace imtk

#endif
