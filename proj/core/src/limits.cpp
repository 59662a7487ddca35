#include "oklab/limits.hpp"

#include <deque>

namespace oklab {

namespace {

struct ScalarSample {
  Rational eps;
  Rational value;
};

// Affine fit through the two oldest samples; the intercept is the limit once
// the fit explains the two newer samples.
bool try_fit(const std::deque<ScalarSample>& w, Rational* intercept) {
  const Rational de = w[0].eps - w[1].eps;
  const Rational slope = (w[0].value - w[1].value) / de;
  const Rational c = w[0].value - slope * w[0].eps;
  for (std::size_t i = 2; i < w.size(); ++i)
    if (w[i].value != c + slope * w[i].eps) return false;
  *intercept = c;
  return true;
}

}  // namespace

Rational limit_at_zero(const std::function<Rational(const Rational&)>& f, int max_steps) {
  std::deque<ScalarSample> window;
  Rational eps(1, 2);
  for (int step = 0; step < max_steps; ++step) {
    window.push_back({eps, f(eps)});
    if (window.size() > 4) window.pop_front();
    if (window.size() == 4) {
      Rational limit;
      if (try_fit(window, &limit)) return limit;
    }
    eps /= Rational(2);
  }
  throw GeomError("limit_at_zero: no affine stabilization");
}

Rational limit_at_zero_poly(const std::function<Rational(const Rational&)>& f, int degree,
                            int max_steps) {
  if (degree < 1) return limit_at_zero(f, max_steps);
  const std::size_t window = static_cast<std::size_t>(degree) + 3;
  std::deque<ScalarSample> samples;
  Rational eps(1, 2);
  for (int step = 0; step < max_steps; ++step) {
    samples.push_back({eps, f(eps)});
    if (samples.size() > window) samples.pop_front();
    if (samples.size() == window) {
      // Newton interpolation through the first degree+1 samples.
      const std::size_t m = static_cast<std::size_t>(degree) + 1;
      std::vector<Rational> xs(m), coef(m);
      for (std::size_t i = 0; i < m; ++i) {
        xs[i] = samples[i].eps;
        coef[i] = samples[i].value;
      }
      for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = m - 1; i >= j; --i)
          coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
      auto eval = [&](const Rational& at) {
        Rational acc = coef[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) acc = acc * (at - xs[i]) + coef[i];
        return acc;
      };
      bool ok = true;
      for (std::size_t i = m; i < window && ok; ++i)
        ok = eval(samples[i].eps) == samples[i].value;
      if (ok) return eval(Rational(0));
    }
    eps /= Rational(2);
  }
  throw GeomError("limit_at_zero_poly: no polynomial stabilization");
}

Polytope limit_polytope_at_zero(const std::function<Polytope(const Rational&)>& f,
                                int max_steps) {
  struct Sample {
    Rational eps;
    std::vector<QVector> verts;  // lex sorted by construction
    int ambient;
  };
  std::deque<Sample> window;
  Rational eps(1, 2);
  for (int step = 0; step < max_steps; ++step) {
    const Polytope p = f(eps);
    window.push_back({eps, p.vertices(), p.ambient_dim()});
    if (window.size() > 4) window.pop_front();
    if (window.size() == 4) {
      const std::size_t n = window[0].verts.size();
      bool same_count = true;
      for (const auto& s : window) same_count &= s.verts.size() == n;
      if (same_count && n > 0) {
        bool ok = true;
        std::vector<QVector> limits;
        const int d = window[0].ambient;
        for (std::size_t v = 0; v < n && ok; ++v) {
          QVector lim(d);
          for (int c = 0; c < d && ok; ++c) {
            std::deque<ScalarSample> path;
            for (const auto& s : window) path.push_back({s.eps, s.verts[v][c]});
            Rational value;
            if (!try_fit(path, &value)) ok = false;
            else lim[c] = value;
          }
          if (ok) limits.push_back(std::move(lim));
        }
        if (ok) return Polytope::hull(d, limits);
      }
    }
    eps /= Rational(2);
  }
  throw GeomError("limit_polytope_at_zero: no stabilization");
}

}  // namespace oklab
