#include "entroflow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

namespace entroflow {

int enumeration_cap_bits() {
    static const int bits = [] {
        if (const char* env = std::getenv("ENTROFLOW_CAP_BITS")) {
            int v = std::atoi(env);
            if (v > 0 && v <= 62) return v;
        }
        return 24;
    }();
    return bits;
}

TorusGeometry::TorusGeometry(int d, std::vector<int> sides, int q)
    : d_(d), sides_(std::move(sides)), q_(q) {
    if (d_ < 1 || static_cast<int>(sides_.size()) != d_)
        throw BadValue("TorusGeometry: sides must have length d >= 1");
    if (q_ < 2) throw BadValue("TorusGeometry: q must be >= 2");
    num_sites_ = 1;
    for (int L : sides_) {
        if (L < 1) throw BadValue("TorusGeometry: side lengths must be positive");
        num_sites_ *= L;
    }
}

std::vector<int> TorusGeometry::coords(std::int64_t site) const {
    std::vector<int> x(d_);
    for (int k = 0; k < d_; ++k) {
        x[k] = static_cast<int>(site % sides_[k]);
        site /= sides_[k];
    }
    return x;
}

std::int64_t TorusGeometry::site(const std::vector<int>& coords) const {
    std::int64_t idx = 0;
    for (int k = d_ - 1; k >= 0; --k) {
        int c = coords[k] % sides_[k];
        if (c < 0) c += sides_[k];
        idx = idx * sides_[k] + c;
    }
    return idx;
}

std::int64_t TorusGeometry::shifted(std::int64_t s, const std::vector<int>& v) const {
    std::vector<int> x = coords(s);
    for (int k = 0; k < d_; ++k) x[k] += v[k];
    return site(x);
}

ConfigIndex TorusGeometry::num_configs() const {
    check_enumeration_cap();
    return pow_q(q_, static_cast<std::size_t>(num_sites_));
}

void TorusGeometry::check_enumeration_cap() const {
    const double bits = static_cast<double>(num_sites_) * std::log2(static_cast<double>(q_));
    if (bits > static_cast<double>(enumeration_cap_bits()))
        throw CapExceeded("state space needs " + std::to_string(bits) + " bits, cap is " +
                          std::to_string(enumeration_cap_bits()));
}

ConfigIndex pow_q(int q, std::size_t n) {
    ConfigIndex r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= static_cast<ConfigIndex>(q);
    return r;
}

SpinConfig::SpinConfig(TorusGeometry g, std::vector<int> s)
    : geom(std::move(g)), states(std::move(s)) {
    if (static_cast<std::int64_t>(states.size()) != geom.num_sites())
        throw BadValue("SpinConfig: state vector length mismatch");
    for (int v : states)
        if (v < 0 || v >= geom.q()) throw BadValue("SpinConfig: state out of range");
}

SpinConfig SpinConfig::constant(const TorusGeometry& g, int value) {
    return SpinConfig(g, std::vector<int>(static_cast<std::size_t>(g.num_sites()), value));
}

Shape::Shape(std::vector<std::vector<int>> offs) : offsets(std::move(offs)) {
    if (offsets.empty()) throw BadValue("Shape: empty offset set");
    const std::size_t d = offsets.front().size();
    bool has_zero = false;
    for (const auto& o : offsets) {
        if (o.size() != d) throw BadValue("Shape: inconsistent offset dimension");
        if (std::all_of(o.begin(), o.end(), [](int c) { return c == 0; })) has_zero = true;
    }
    if (!has_zero) throw BadValue("Shape: must contain the zero offset");
    std::sort(offsets.begin(), offsets.end());
    if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
        throw BadValue("Shape: duplicate offsets");
}

std::vector<std::int64_t> Shape::sites_at(const TorusGeometry& g, std::int64_t base) const {
    std::vector<std::int64_t> sites;
    sites.reserve(offsets.size());
    for (const auto& o : offsets) {
        const std::int64_t s = g.shifted(base, o);
        for (std::int64_t prev : sites)
            if (prev == s) throw RangeError("shape self-overlaps after torus wrap");
        sites.push_back(s);
    }
    return sites;
}

int Shape::radius() const {
    int r = 0;
    for (const auto& o : offsets)
        for (int c : o) r = std::max(r, std::abs(c));
    return r;
}

SpinConfig decode_config(const TorusGeometry& geom, ConfigIndex index) {
    std::vector<int> states(static_cast<std::size_t>(geom.num_sites()));
    for (auto& s : states) {
        s = static_cast<int>(index % static_cast<ConfigIndex>(geom.q()));
        index /= static_cast<ConfigIndex>(geom.q());
    }
    return SpinConfig(geom, std::move(states));
}

ConfigIndex encode_config(const SpinConfig& cfg) {
    ConfigIndex idx = 0;
    for (auto it = cfg.states.rbegin(); it != cfg.states.rend(); ++it)
        idx = idx * static_cast<ConfigIndex>(cfg.geom.q()) + static_cast<ConfigIndex>(*it);
    return idx;
}

std::vector<SpinConfig> enumerate_configs(const TorusGeometry& geom) {
    const ConfigIndex n = geom.num_configs();
    std::vector<SpinConfig> out;
    out.reserve(static_cast<std::size_t>(n));
    for (ConfigIndex i = 0; i < n; ++i) out.push_back(decode_config(geom, i));
    return out;
}

SpinConfig translate(const SpinConfig& cfg, const std::vector<int>& v) {
    const auto& g = cfg.geom;
    std::vector<int> neg(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) neg[k] = -v[k];
    std::vector<int> states(cfg.states.size());
    for (std::int64_t i = 0; i < g.num_sites(); ++i)
        states[static_cast<std::size_t>(i)] =
            cfg.states[static_cast<std::size_t>(g.shifted(i, neg))];
    return SpinConfig(g, std::move(states));
}

SpinConfig patch(const SpinConfig& cfg, const std::vector<std::int64_t>& region,
                 const std::vector<int>& local) {
    if (region.size() != local.size())
        throw BadValue("patch: region and assignment size mismatch");
    std::vector<int> states = cfg.states;
    for (std::size_t k = 0; k < region.size(); ++k) {
        if (local[k] < 0 || local[k] >= cfg.geom.q())
            throw BadValue("patch: assigned value out of range");
        states[static_cast<std::size_t>(region[k])] = local[k];
    }
    return SpinConfig(cfg.geom, std::move(states));
}

std::vector<int> local_assignment(int q, std::size_t region_size, ConfigIndex index) {
    std::vector<int> vals(region_size);
    for (auto& v : vals) {
        v = static_cast<int>(index % static_cast<ConfigIndex>(q));
        index /= static_cast<ConfigIndex>(q);
    }
    return vals;
}

ConfigIndex local_index(int q, const std::vector<std::int64_t>& region,
                        const std::vector<int>& full_states) {
    ConfigIndex idx = 0;
    for (auto it = region.rbegin(); it != region.rend(); ++it)
        idx = idx * static_cast<ConfigIndex>(q) +
              static_cast<ConfigIndex>(full_states[static_cast<std::size_t>(*it)]);
    return idx;
}

}  // namespace entroflow
