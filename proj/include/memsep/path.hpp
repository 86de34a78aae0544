#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memsep/errors.hpp"
#include "memsep/hermite.hpp"
#include "memsep/model.hpp"

namespace memsep {

/// Rate of change of (x_L, x_R); per second, per unit s or per unit arc
/// length depending on context.
struct Velocity {
  double v_l = 0.0;
  double v_r = 0.0;
};

struct PathSample {
  double s = 0.0;  ///< rescaled time t / tau
  ConfigPoint pt;
};

/// A protocol: configuration points at strictly increasing rescaled times
/// from s = 0 to s = 1. Optional tangents dx/ds make interpolation exact to
/// the source curve; without them slopes come from the samples.
class PathSamples {
 public:
  explicit PathSamples(std::vector<PathSample> samples, std::vector<Velocity> tangents = {})
      : samples_(std::move(samples)), tangents_(std::move(tangents)) {
    if (samples_.size() < 2) {
      throw DomainError("PathSamples: need at least two samples");
    }
    if (samples_.front().s != 0.0 || std::abs(samples_.back().s - 1.0) > 1e-12) {
      throw DomainError("PathSamples: s must run from 0 to 1");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      require_valid(samples_[i].pt, "PathSamples");
      if (i > 0 && !(samples_[i].s > samples_[i - 1].s)) {
        throw DomainError("PathSamples: s not strictly increasing at index " + std::to_string(i));
      }
    }
    if (!tangents_.empty() && tangents_.size() != samples_.size()) {
      throw DomainError("PathSamples: tangent count does not match sample count");
    }
  }

  /// Points spread uniformly in s.
  static PathSamples uniform(const std::vector<ConfigPoint>& pts) {
    std::vector<PathSample> out;
    out.reserve(pts.size());
    const double n = static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out.push_back({i + 1 == pts.size() ? 1.0 : static_cast<double>(i) / n, pts[i]});
    }
    return PathSamples(std::move(out));
  }

  std::span<const PathSample> samples() const noexcept { return samples_; }
  std::span<const Velocity> tangents() const noexcept { return tangents_; }
  bool has_tangents() const noexcept { return !tangents_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }
  const PathSample& front() const noexcept { return samples_.front(); }
  const PathSample& back() const noexcept { return samples_.back(); }

 private:
  std::vector<PathSample> samples_;
  std::vector<Velocity> tangents_;
};

/// Piecewise cubic Hermite through a PathSamples, with first and second
/// derivatives in s.
class ProtocolInterpolant {
 public:
  struct Eval {
    ConfigPoint pt;
    Velocity d1;  ///< dx/ds
    Velocity d2;  ///< d2x/ds2
  };

  explicit ProtocolInterpolant(const PathSamples& path) {
    const auto samples = path.samples();
    s_.reserve(samples.size());
    xl_.reserve(samples.size());
    xr_.reserve(samples.size());
    for (const auto& p : samples) {
      s_.push_back(p.s);
      xl_.push_back(p.pt.x_l);
      xr_.push_back(p.pt.x_r);
    }
    if (path.has_tangents()) {
      for (const auto& v : path.tangents()) {
        dl_.push_back(v.v_l);
        dr_.push_back(v.v_r);
      }
    } else {
      dl_ = pchip_slopes(s_, xl_);
      dr_ = pchip_slopes(s_, xr_);
    }
  }

  double s_begin() const noexcept { return s_.front(); }
  double s_end() const noexcept { return s_.back(); }

  Eval at(double s) const {
    s = std::clamp(s, s_.front(), s_.back());
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin()) - 1;
    if (i + 1 >= s_.size()) i = s_.size() - 2;
    const auto l = hermite(s_[i], s_[i + 1], xl_[i], xl_[i + 1], dl_[i], dl_[i + 1], s);
    const auto r = hermite(s_[i], s_[i + 1], xr_[i], xr_[i + 1], dr_[i], dr_[i + 1], s);
    return {{l.value, r.value}, {l.d1, r.d1}, {l.d2, r.d2}};
  }

 private:
  std::vector<double> s_, xl_, xr_, dl_, dr_;
};

}  // namespace memsep
