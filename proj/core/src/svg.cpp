#include "oklab/svg.hpp"

#include <algorithm>
#include <sstream>

#include "oklab/errors.hpp"

namespace oklab::svg {

namespace {

// Fixed-point decimal with three digits, via exact integer rounding.
std::string fixed3(const Rational& r) {
  const Rational scaled = Rational(1000) * r;
  mpz_class n = (scaled + Rational(1, 2)).floor_z();
  std::string sign;
  if (n < 0) {
    sign = "-";
    n = -n;
  }
  const mpz_class whole = n / 1000, frac = n % 1000;
  std::string f = frac.get_str();
  while (f.size() < 3) f.insert(f.begin(), '0');
  return sign + whole.get_str() + "." + f;
}

// Boundary order of a convex polygon: sort around the vertex centroid with
// exact half-plane plus cross-product comparisons.
std::vector<QVector> boundary_order(const std::vector<QVector>& verts) {
  QVector center(2);
  for (const auto& v : verts) center += v;
  const Rational inv(1, static_cast<long long>(verts.size()));
  center *= inv;
  std::vector<QVector> out = verts;
  auto half = [&](const QVector& p) {
    const Rational dy = p[1] - center[1], dx = p[0] - center[0];
    return (dy > Rational(0) || (dy == Rational(0) && dx > Rational(0))) ? 0 : 1;
  };
  std::sort(out.begin(), out.end(), [&](const QVector& a, const QVector& b) {
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    const Rational cross = (a[0] - center[0]) * (b[1] - center[1]) -
                           (a[1] - center[1]) * (b[0] - center[0]);
    if (!cross.is_zero()) return cross.sgn() > 0;
    return lex_less(a, b);
  });
  return out;
}

}  // namespace

std::string render(const Polytope& p) {
  if (p.ambient_dim() != 2) throw GeomError("svg: only plane bodies are rendered");

  std::ostringstream os;
  if (p.is_empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 320 120\">\n"
       << "  <text x=\"16.000\" y=\"64.000\" font-family=\"monospace\" font-size=\"14\">"
          "empty body</text>\n"
       << "</svg>\n";
    return os.str();
  }

  Rational min_x = p.vertices()[0][0], max_x = min_x;
  Rational min_y = p.vertices()[0][1], max_y = min_y;
  for (const auto& v : p.vertices()) {
    min_x = min(min_x, v[0]);
    max_x = max(max_x, v[0]);
    min_y = min(min_y, v[1]);
    max_y = max(max_y, v[1]);
  }
  Rational span = max(max_x - min_x, max_y - min_y);
  if (span.is_zero()) span = Rational(1);
  const Rational pad = span / Rational(8);
  min_x -= pad;
  min_y -= pad;
  max_x += pad;
  max_y += pad;

  const Rational scale = Rational(480) / span;
  auto sx = [&](const Rational& x) { return fixed3((x - min_x) * scale); };
  auto sy = [&](const Rational& y) { return fixed3((max_y - y) * scale); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fixed3((max_x - min_x) * scale)
     << " " << fixed3((max_y - min_y) * scale) << "\">\n";

  const auto ordered = boundary_order(p.vertices());
  if (p.affine_dim() == 2) {
    os << "  <polygon points=\"";
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      if (i) os << " ";
      os << sx(ordered[i][0]) << "," << sy(ordered[i][1]);
    }
    os << "\" fill=\"#dce9f7\" stroke=\"#23538f\" stroke-width=\"2\"/>\n";
  } else if (p.affine_dim() == 1) {
    os << "  <line x1=\"" << sx(ordered.front()[0]) << "\" y1=\"" << sy(ordered.front()[1])
       << "\" x2=\"" << sx(ordered.back()[0]) << "\" y2=\"" << sy(ordered.back()[1])
       << "\" stroke=\"#23538f\" stroke-width=\"3\"/>\n";
  }
  for (const auto& v : ordered) {
    os << "  <circle cx=\"" << sx(v[0]) << "\" cy=\"" << sy(v[1])
       << "\" r=\"4\" fill=\"#23538f\"/>\n";
    os << "  <text x=\"" << sx(v[0]) << "\" y=\"" << sy(v[1])
       << "\" dx=\"6\" dy=\"-6\" font-family=\"monospace\" font-size=\"13\">(" << v[0].str()
       << ", " << v[1].str() << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace oklab::svg
