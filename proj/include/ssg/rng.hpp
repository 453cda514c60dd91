#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ssg {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Master seed. Sub-seeds are a pure function of (master, label, index), so
// work items can be seeded independently of the order they run in.
struct Seed {
  std::uint64_t master = 0;

  [[nodiscard]] constexpr Seed derive(std::string_view label,
                                      std::uint64_t index = 0) const noexcept {
    return Seed{splitmix64(splitmix64(master ^ fnv1a(label)) + index)};
  }

  friend constexpr bool operator==(Seed, Seed) = default;
};

// mt19937_64's output sequence is fixed by the standard; the distribution
// transforms below are written out by hand because the std:: distributions
// are implementation-defined.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.master) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // +1 or -1 with equal probability.
  int sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

  // Uniform integer in [0, bound), rejection-sampled.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Kahan-Babuska compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Running mean and standard error of the mean, accumulated in a fixed order.
class MeanAccumulator {
 public:
  void add(double x) noexcept {
    ++count_;
    sum_.add(x);
    sum_sq_.add(x * x);
  }
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] double mean() const noexcept {
    return count_ == 0 ? 0.0 : sum_.value() / static_cast<double>(count_);
  }
  [[nodiscard]] double variance() const noexcept {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double mu = mean();
    const double v = (sum_sq_.value() - n * mu * mu) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  [[nodiscard]] double std_error() const noexcept {
    if (count_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count_));
  }

 private:
  std::uint64_t count_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

}  // namespace ssg
