#include "aniso/core_model.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

std::string to_string(const Vertex& v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

std::string to_string(const Edge& e) {
    return "<" + to_string(e.from) + "," + to_string(e.to()) + ">";
}

Edge edge_between(Vertex a, Vertex b) {
    if (b < a) std::swap(a, b);
    if (a.y == b.y && b.x == a.x + 1) return {a, EdgeKind::horizontal};
    if (a.x == b.x && b.y == a.y + 1) return {a, EdgeKind::vertical};
    throw UsageError("vertices " + to_string(a) + " and " + to_string(b) + " are not adjacent");
}

int norm_x(Vertex x) {
    if (x.x <= 0 || x.y <= 0)
        throw UsageError("norm_x requires positive coordinates, got " + to_string(x));
    return 2 * (x.x + x.y + 2);
}

// ---------------------------------------------------------------------------

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

double Params::lambda_h() const {
    if (p_h_ == 0.0) throw DomainError("lambda_h is undefined for p_h = 0");
    return (1.0 - p_h_) / p_h_;
}

double Params::lambda_v() const {
    if (p_v_ == 0.0) throw DomainError("lambda_v is undefined for p_v = 0");
    return (1.0 - p_v_) / p_v_;
}

double Params::eta() const {
    const double lh = lambda_h();
    if (lh == 0.0) throw DomainError("eta is undefined for lambda_h = 0 (p_h = 1)");
    return lambda_v() / lh;
}

Params make_params(double p_h, double p_v) {
    if (!is_probability(p_h) || !is_probability(p_v))
        throw UsageError("probabilities must lie in [0,1]");
    if (p_h == 0.0) throw UsageError("p_h must be positive");
    if (p_h > p_v) throw UsageError("the standing assumption p_h <= p_v is violated");
    return {p_h, p_v};
}

Params make_params_unordered(double p_h, double p_v) {
    if (!is_probability(p_h) || !is_probability(p_v))
        throw UsageError("probabilities must lie in [0,1]");
    return {p_h, p_v};
}

Params params_from_eta(double p_h, double eta) {
    if (!std::isfinite(p_h) || p_h <= 0.0 || p_h >= 1.0)
        throw UsageError("params_from_eta requires 0 < p_h < 1");
    if (!std::isfinite(eta) || eta <= 0.0 || eta > 1.0)
        throw UsageError("params_from_eta requires 0 < eta <= 1");
    const double lambda_h = (1.0 - p_h) / p_h;
    const double p_v = eta == 1.0 ? p_h : 1.0 / (1.0 + eta * lambda_h);
    return make_params(p_h, p_v);
}

// ---------------------------------------------------------------------------

LatticeRegion::LatticeRegion(int x_lo, int x_hi, int y_lo, int y_hi)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
    if (x_lo > x_hi || y_lo > y_hi) throw UsageError("empty region");
}

std::size_t LatticeRegion::vertex_index(Vertex v) const {
    if (!contains(v)) throw UsageError("vertex " + to_string(v) + " outside region " + aniso::to_string(*this));
    return static_cast<std::size_t>(v.y - y_lo_) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(v.x - x_lo_);
}

Vertex LatticeRegion::vertex_at(std::size_t index) const {
    if (index >= vertex_count()) throw UsageError("vertex index out of range");
    const auto w = static_cast<std::size_t>(width());
    return {x_lo_ + static_cast<int>(index % w), y_lo_ + static_cast<int>(index / w)};
}

std::size_t LatticeRegion::edge_index(const Edge& e) const {
    if (!contains(e)) throw UsageError("edge " + to_string(e) + " outside region " + aniso::to_string(*this));
    const auto col = static_cast<std::size_t>(e.from.x - x_lo_);
    const auto row = static_cast<std::size_t>(e.from.y - y_lo_);
    if (e.is_horizontal()) return row * static_cast<std::size_t>(width() - 1) + col;
    return horizontal_edge_count() + row * static_cast<std::size_t>(width()) + col;
}

Edge LatticeRegion::edge_at(std::size_t index) const {
    const std::size_t eh = horizontal_edge_count();
    if (index < eh) {
        const auto w = static_cast<std::size_t>(width() - 1);
        return {{x_lo_ + static_cast<int>(index % w), y_lo_ + static_cast<int>(index / w)}, EdgeKind::horizontal};
    }
    index -= eh;
    if (index >= vertical_edge_count()) throw UsageError("edge index out of range");
    const auto w = static_cast<std::size_t>(width());
    return {{x_lo_ + static_cast<int>(index % w), y_lo_ + static_cast<int>(index / w)}, EdgeKind::vertical};
}

std::string to_string(const LatticeRegion& r) {
    std::ostringstream os;
    os << "[" << r.x_lo() << "," << r.x_hi() << "]x[" << r.y_lo() << "," << r.y_hi() << "]";
    return os.str();
}

// ---------------------------------------------------------------------------

Configuration::Configuration(const LatticeRegion& region)
    : region_(region), size_(region.edge_count()), words_((size_ + 63) / 64, 0) {}

std::size_t Configuration::closed_horizontal() const noexcept {
    std::size_t n = 0;
    const std::size_t eh = region_.horizontal_edge_count();
    for (std::size_t i = 0; i < eh; ++i) n += is_closed(i) ? 1 : 0;
    return n;
}

std::size_t Configuration::closed_vertical() const noexcept {
    std::size_t total = 0;
    for (const auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total - closed_horizontal();
}

Configuration Configuration::reflected() const {
    Configuration out(region_.reflected());
    for (std::size_t i = 0; i < size_; ++i) {
        if (is_closed(i)) out.set_closed(out.region_.edge_index(reflect(region_.edge_at(i))), true);
    }
    return out;
}

// ---------------------------------------------------------------------------

TargetPair make_target(int x1, int x2) {
    if (x1 <= 0 || x2 <= x1) throw UsageError("target requires 0 < x1 < x2");
    const int g = std::gcd(x1, x2);
    return {{x1, x2}, {x2, x1}, norm_x({x1, x2}), x2 / g, x1 / g};
}

}  // namespace aniso
