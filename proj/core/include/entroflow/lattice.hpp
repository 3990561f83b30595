#pragma once

#include <cstdint>
#include <vector>

#include "entroflow/errors.hpp"

namespace entroflow {

using ConfigIndex = std::uint64_t;

// Finite d-dimensional periodic lattice with local state space {0,...,q-1}.
// Site indexing is row-major with axis 1 fastest:
//   index = x_1 + L_1 * (x_2 + L_2 * (x_3 + ...)).
class TorusGeometry {
  public:
    TorusGeometry(int d, std::vector<int> sides, int q);

    int dim() const { return d_; }
    int q() const { return q_; }
    const std::vector<int>& sides() const { return sides_; }
    std::int64_t num_sites() const { return num_sites_; }

    std::vector<int> coords(std::int64_t site) const;
    std::int64_t site(const std::vector<int>& coords) const;  // wraps mod sides

    // site shifted by offset vector v (periodic wrap)
    std::int64_t shifted(std::int64_t site, const std::vector<int>& v) const;

    // number of configurations q^{|Lambda|}; throws CapExceeded beyond the
    // enumeration cap (default 24 bits, env ENTROFLOW_CAP_BITS overrides)
    ConfigIndex num_configs() const;
    void check_enumeration_cap() const;

    bool operator==(const TorusGeometry& o) const {
        return d_ == o.d_ && q_ == o.q_ && sides_ == o.sides_;
    }

  private:
    int d_;
    std::vector<int> sides_;
    int q_;
    std::int64_t num_sites_;
};

int enumeration_cap_bits();

struct SpinConfig {
    TorusGeometry geom;
    std::vector<int> states;  // length num_sites, entries in {0,...,q-1}

    SpinConfig(TorusGeometry g, std::vector<int> s);
    static SpinConfig constant(const TorusGeometry& g, int value);
};

// Finite set of integer offset vectors containing 0, kept in lexicographic
// order (canonical anchored representative of a translation class).
struct Shape {
    std::vector<std::vector<int>> offsets;

    explicit Shape(std::vector<std::vector<int>> offs);
    std::size_t size() const { return offsets.size(); }

    // Translated sites: offsets + base site, wrapped on the torus. Throws
    // RangeError if wrapping collapses two offsets onto the same site.
    std::vector<std::int64_t> sites_at(const TorusGeometry& g, std::int64_t base) const;

    int radius() const;  // max sup-norm of offsets
};

// base-q little-endian digits in site order
SpinConfig decode_config(const TorusGeometry& geom, ConfigIndex index);
ConfigIndex encode_config(const SpinConfig& cfg);

std::vector<SpinConfig> enumerate_configs(const TorusGeometry& geom);

SpinConfig translate(const SpinConfig& cfg, const std::vector<int>& v);

SpinConfig patch(const SpinConfig& cfg, const std::vector<std::int64_t>& region,
                 const std::vector<int>& local);

// Local assignment of a region, index = base-q little-endian over the region
// in its given site order.
std::vector<int> local_assignment(int q, std::size_t region_size, ConfigIndex index);
ConfigIndex local_index(int q, const std::vector<std::int64_t>& region,
                        const std::vector<int>& full_states);

ConfigIndex pow_q(int q, std::size_t n);

}  // namespace entroflow
