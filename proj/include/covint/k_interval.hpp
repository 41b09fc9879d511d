// Copyright 2026 The covint authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COVINT_K_INTERVAL_HPP
#define COVINT_K_INTERVAL_HPP

#include <optional>
#include <string>

namespace covint {

/// A contiguous range {k_lo .. k_hi} of integers, either end possibly
/// unbounded, or empty.  Events of the form {K in I} are represented this
/// way throughout the library.
class KIndexInterval {
 public:
  static KIndexInterval empty_range() { return KIndexInterval(); }

  static KIndexInterval bounded(long long lo, long long hi) {
    KIndexInterval r;
    if (lo <= hi) {
      r.empty_ = false;
      r.lo_ = lo;
      r.hi_ = hi;
    }
    return r;
  }

  /// [lo, +inf)
  static KIndexInterval at_least(long long lo) {
    KIndexInterval r;
    r.empty_ = false;
    r.lo_ = lo;
    r.hi_ = std::nullopt;
    return r;
  }

  /// (-inf, hi]
  static KIndexInterval at_most(long long hi) {
    KIndexInterval r;
    r.empty_ = false;
    r.lo_ = std::nullopt;
    r.hi_ = hi;
    return r;
  }

  static KIndexInterval all() {
    KIndexInterval r;
    r.empty_ = false;
    return r;
  }

  bool empty() const { return empty_; }

  /// nullopt means the end is unbounded.  Only meaningful when non-empty.
  std::optional<long long> lo() const { return lo_; }
  std::optional<long long> hi() const { return hi_; }

  bool contains(long long k) const {
    if (empty_) return false;
    if (lo_ && k < *lo_) return false;
    if (hi_ && k > *hi_) return false;
    return true;
  }

  friend bool operator==(const KIndexInterval& a, const KIndexInterval& b) {
    if (a.empty_ != b.empty_) return false;
    if (a.empty_) return true;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  /// Set inclusion (both treated as subsets of the integers).
  bool subset_of(const KIndexInterval& other) const {
    if (empty_) return true;
    if (other.empty_) return false;
    if (other.lo_ && (!lo_ || *lo_ < *other.lo_)) return false;
    if (other.hi_ && (!hi_ || *hi_ > *other.hi_)) return false;
    return true;
  }

  std::string str() const {
    if (empty_) return "{}";
    std::string s = "[";
    s += lo_ ? std::to_string(*lo_) : "-inf";
    s += ", ";
    s += hi_ ? std::to_string(*hi_) : "+inf";
    s += "]";
    return s;
  }

 private:
  KIndexInterval() = default;
  bool empty_ = true;
  std::optional<long long> lo_ = 0;
  std::optional<long long> hi_ = 0;
};

}  // namespace covint

#endif  // COVINT_K_INTERVAL_HPP
