#include "ermo/verify.hpp"

#include "ermo/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ermo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

const std::map<std::string, double>& default_tolerances()
{
    static const std::map<std::string, double> t = {
        {"yang_baxter", 1e-9},
        {"unitarity", 1e-9},
        {"unitarity_degenerate", 1e-8},
        {"reduced_word_independence", 1e-10},
        {"commutativity", 1e-8},
        {"weyl_invariance", 1e-9},
        {"closed_form_equiv", 1e-9},
        {"bar_representation", 1e-9},
        {"lengths_vs_bfs", 0.0},
        {"theta_quasiperiodicity", 1e-10},
        {"theta_eta_ratio", 1e-12},
        {"theta_wp0", 1e-10},
        {"theta_closure", 1e-7},
        {"leading_term", 1e-9},
    };
    return t;
}

constexpr int kBfsDepth = 8;
constexpr int kIdentityTrials = 100;
constexpr int kPoleRetries = 20;
constexpr int kRankRetries = 5;
constexpr double kWallMargin = 0.05;
constexpr int kCandidateFactor = 4;
constexpr double kMaxCancellation = 1e8;

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json cjson(const CVec& v)
{
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cjson(v[i]));
    return out;
}

nlohmann::json rjson(const RVec& v)
{
    auto out = nlohmann::json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

// Worst relative residual over samples, with the point where it occurred.
struct Tracker {
    double worst = 0.0;
    double scale = 0.0;
    CVec point;
    std::string where;
    int samples = 0;

    void add(double diff, double sc, const CVec& x, const std::string& label = {})
    {
        ++samples;
        const double r = sc > 0.0 ? diff / sc : diff;
        if (r > worst || point.size() == 0) {
            worst = r;
            scale = sc;
            point = x;
            where = label;
        }
    }
};

// A named sub-comparison with its own tolerance.
struct Part {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    int samples = 0;
};

bool within(double residual, double tol) { return tol == 0.0 ? residual == 0.0 : residual < tol; }

double lattice_distance(cplx z, cplx tau)
{
    double best = std::numeric_limits<double>::infinity();
    const double c = std::round(z.imag() / tau.imag());
    for (double n = c - 1; n <= c + 1; ++n) {
        const cplx w = z - n * tau;
        best = std::min(best, std::abs(w - std::round(w.real())));
    }
    return best;
}

// Smallest distance of 2 (f|x) + 2 kappa n over the atoms of op to Z + tau Z, which contains every
// theta_1 zero hyperplane the coefficients can meet.
double wall_distance(const DROperator& op, const CVec& x)
{
    const auto& ctx = op.context();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : op.atoms()) {
        const cplx arg = pair_c(ctx.d(), a.arg.fin, x) + ctx.spectral.kappa * to_double(a.arg.n);
        best = std::min(best, lattice_distance(2.0 * arg, ctx.tau));
    }
    return best;
}

// Calls body(x) on n points, redrawing a point whose evaluation hits the pole guard.
void for_points(Sampler& s, int n, double imag, const std::function<void(const CVec&)>& body)
{
    for (int p = 0; p < n; ++p) {
        for (int attempt = 0;; ++attempt) {
            try {
                body(s.point(imag));
                break;
            } catch (const PoleError&) {
                if (attempt + 1 >= kPoleRetries) throw;
            }
        }
    }
}

void compare(Tracker& t, const DROperator& a, const DROperator& b, const TestFunction& f, Sampler& s, int n, double imag,
             const std::string& label = {})
{
    for_points(s, n, imag, [&](const CVec& x) {
        const Applied ra = a.apply(f, x), rb = b.apply(f, x);
        t.add(std::abs(ra.value - rb.value), std::max(ra.scale, rb.scale), x, label);
    });
}

void fill(CheckReport& r, const Tracker& t, double tol)
{
    r.residual = t.worst;
    r.scale = t.scale;
    r.samples = t.samples;
    r.status = within(t.worst, tol) ? CheckStatus::Pass : CheckStatus::Fail;
    if (t.point.size() > 0) r.diagnostics["worst_point"] = cjson(t.point);
    if (!t.where.empty()) r.diagnostics["worst_case"] = t.where;
}

void fill(CheckReport& r, const std::vector<Part>& parts)
{
    auto arr = nlohmann::json::array();
    bool ok = true;
    r.residual = 0.0;
    r.samples = 0;
    for (const auto& p : parts) {
        const bool pass = within(p.residual, p.tolerance);
        ok = ok && pass;
        r.residual = std::max(r.residual, p.residual);
        r.samples += p.samples;
        arr.push_back({{"name", p.name}, {"residual", p.residual}, {"tolerance", p.tolerance}, {"samples", p.samples},
                       {"pass", pass}});
    }
    r.diagnostics["parts"] = arr;
    r.scale = 1.0;
    r.status = parts.empty() ? CheckStatus::Skipped : (ok ? CheckStatus::Pass : CheckStatus::Fail);
}

int braid_order(const AffineRootDatum& d, int i, int j)
{
    switch (d.cartan()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
            d.cartan()[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: return 0;
    }
}

std::vector<int> alternating(int i, int j, int m)
{
    std::vector<int> w;
    for (int n = 0; n < m; ++n) w.push_back(n % 2 == 0 ? i : j);
    return w;
}

// Reduced word built from the largest left descent at every step.
ReducedWord reduced_word_last_descent(const AffineRootDatum& d, const ExtendedWeylElement& w)
{
    ReducedWord out;
    ExtendedWeylElement cur = w;
    int len = length(d, cur);
    while (len > 0) {
        bool found = false;
        for (int i = d.rank(); i >= 0; --i) {
            auto next = compose(simple_reflection(d, i), cur);
            const int nl = length(d, next);
            if (nl < len) {
                out.letters.push_back(i);
                cur = next;
                len = nl;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("no left descent found");
    }
    out.omega = cur;
    return out;
}

Eigen::MatrixXcd finite_matrix(const ExtendedWeylElement& w)
{
    const auto n = static_cast<Eigen::Index>(w.finite.n);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = to_double(w.finite(static_cast<int>(i), static_cast<int>(j)));
    return m;
}

bool at_invariant_point(const OperatorContext& ctx) { return (ctx.spectral.xi + ctx.rho_mu()).norm() < 1e-12; }

std::shared_ptr<const OperatorContext> with(const OperatorContext& base, const std::function<void(OperatorContext&)>& edit)
{
    OperatorContext c = base;
    edit(c);
    return std::make_shared<const OperatorContext>(c);
}

// Sampler seed per check so that results do not depend on which other checks run.
std::uint64_t check_seed(const ScenarioConfig& cfg, const std::string& name)
{
    const auto& names = known_checks();
    const auto idx = static_cast<std::uint64_t>(std::find(names.begin(), names.end(), name) - names.begin());
    return cfg.seed * 1000003ULL + 7919ULL * (idx + 1);
}

// ------------------------------------------------------------------ checks

void check_yang_baxter(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                       CheckReport& r)
{
    const auto& d = ctx->d();
    auto f = s.exponential_sum();
    Tracker t;
    int relations = 0;
    for (int i = 0; i <= d.rank(); ++i)
        for (int j = i + 1; j <= d.rank(); ++j) {
            const int m = braid_order(d, i, j);
            if (m == 0) continue;
            const auto id = ExtendedWeylElement::identity(d.rank());
            ReducedWord w1{alternating(i, j, m), id}, w2{alternating(j, i, m), id};
            auto lhs = r_product(ctx, inversion_sequence(d, w1));
            auto rhs = r_product(ctx, inversion_sequence(d, w2));
            compare(t, lhs, rhs, f, s, cfg.sample_points, cfg.sample_imag,
                    "nodes " + std::to_string(i) + "," + std::to_string(j) + " order " + std::to_string(m));
            ++relations;
        }
    fill(r, t, cfg.tolerance("yang_baxter"));
    r.diagnostics["relations"] = relations;
    if (relations == 0) {
        r.status = CheckStatus::Skipped;
        r.diagnostics["reason"] = "no finite braid relations between the simple reflections";
    }
}

void check_unitarity(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                     CheckReport& r)
{
    const auto& d = ctx->d();
    auto f = s.exponential_sum();
    Tracker t;
    auto scalars = nlohmann::json::array();
    for (int i = 0; i <= d.rank(); ++i) {
        const AffineRoot a = d.simple_root(i);
        auto rr = compose(r_matrix(ctx, a), r_matrix(ctx, -a));
        const cplx u = unitarity_scalar(*ctx, a);
        scalars.push_back(cjson(u));
        auto expect = DROperator::element(ctx, GroupElement::identity(d.rank()), u);
        compare(t, rr, expect, f, s, cfg.sample_points, cfg.sample_imag, "node " + std::to_string(i));
    }
    fill(r, t, cfg.tolerance("unitarity"));
    r.diagnostics["u"] = scalars;

    // <xi, a^vee> = mu_a makes R_a R_{-a} vanish.
    const AffineRoot a = d.simple_root(1);
    auto deg = with(*ctx, [&](OperatorContext& c) {
        const cplx p = c.xi_pairing(a.fin);
        c.spectral.xi += (c.mu(a.fin) - p) / 2.0 * to_cvec(a.fin);
    });
    auto rr = compose(r_matrix(deg, a), r_matrix(deg, -a));
    Tracker td;
    for_points(s, cfg.sample_points, cfg.sample_imag, [&](const CVec& x) {
        const Applied v = rr.apply(f, x);
        td.add(std::abs(v.value), v.scale, x);
    });
    const double tol = cfg.tolerance("unitarity_degenerate");
    r.diagnostics["degenerate_residual"] = td.worst;
    r.diagnostics["degenerate_tolerance"] = tol;
    r.samples += td.samples;
    if (!within(td.worst, tol)) r.status = CheckStatus::Fail;
}

void check_reduced_words(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                         CheckReport& r)
{
    const auto& d = ctx->d();
    auto f = s.exponential_sum();
    Tracker t;
    auto words = nlohmann::json::array();
    for (std::size_t i = 0; i < d.weight_basis().size(); ++i) {
        const RVec lam = -d.weight_basis()[i];
        const auto w = translation(lam);
        const auto w1 = reduced_word(d, w), w2 = reduced_word_last_descent(d, w);
        if (!(evaluate(d, w2) == w)) throw std::logic_error("alternative reduced word does not rebuild t_lambda");
        words.push_back({{"lambda", rjson(lam)}, {"first", w1.letters}, {"second", w2.letters}});
        compare(t, y_operator(ctx, lam, w1), y_operator(ctx, lam, w2), f, s, cfg.sample_points, cfg.sample_imag,
                "-lambda_" + std::to_string(i + 1));
    }
    fill(r, t, cfg.tolerance("reduced_word_independence"));
    r.diagnostics["words"] = words;
}

void check_commutativity(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                         CheckReport& r)
{
    const auto& d = ctx->d();
    auto f = s.exponential_sum();
    const auto& wb = d.weight_basis();
    const int n = static_cast<int>(wb.size());
    Tracker t;
    nlohmann::json terms = nlohmann::json::object();
    for (int i = 0; i < n; ++i)
        for (int j = (n == 1 ? i : i + 1); j < n; ++j) {
            const RVec l1 = -wb[static_cast<std::size_t>(i)], l2 = -wb[static_cast<std::size_t>(j)];
            auto y1 = y_operator(ctx, l1), y2 = y_operator(ctx, l2), y12 = y_operator(ctx, l1 + l2);
            auto c12 = compose(y1, y2), c21 = compose(y2, y1);
            auto a = y1.as_function(y2.as_function(f));
            auto b = y2.as_function(y1.as_function(f));
            const std::string label = std::to_string(i + 1) + "," + std::to_string(j + 1);
            terms[label] = {y1.terms().size(), y2.terms().size(), y12.terms().size()};
            for_points(s, cfg.sample_points, cfg.sample_imag, [&](const CVec& x) {
                const Applied ref = y12.apply(f, x);
                const double sc = std::max({ref.scale, c12.apply(f, x).scale, c21.apply(f, x).scale});
                const cplx va = a(x), vb = b(x);
                t.add(std::max(std::abs(va - vb), std::abs(va - ref.value)), sc, x, "lambda " + label);
            });
        }
    fill(r, t, cfg.tolerance("commutativity"));
    r.diagnostics["term_counts"] = terms;
}

void check_weyl_invariance(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                           CheckReport& r)
{
    const auto& d = ctx->d();
    if (cfg.mode == SpectralMode::Generic) {
        r.diagnostics["reason"] = "generic xi: Y does not preserve invariant functions";
        return;
    }
    auto f = s.symmetrize(s.exponential_sum());
    std::vector<Eigen::MatrixXcd> reflections;
    for (int j = 0; j < d.rank(); ++j) reflections.push_back(finite_matrix(finite_reflection(d, d.unit(j))));
    Tracker t;
    for (std::size_t i = 0; i < d.weight_basis().size(); ++i) {
        auto y = y_operator(ctx, -d.weight_basis()[i]);
        auto g = y.as_function(f);
        for_points(s, cfg.sample_points, cfg.sample_imag, [&](const CVec& x) {
            const Applied v = y.apply(f, x);
            for (std::size_t j = 0; j < reflections.size(); ++j) {
                const CVec wx = reflections[j] * x;
                const double sc = std::max(v.scale, y.apply(f, wx).scale);
                t.add(std::abs(g(wx) - v.value), sc, x,
                      "-lambda_" + std::to_string(i + 1) + " reflection " + std::to_string(j + 1));
            }
        });
    }
    fill(r, t, cfg.tolerance("weyl_invariance"));
    r.diagnostics["xi_offset"] = (ctx->spectral.xi + ctx->rho_mu()).norm();
}

void check_closed_forms(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                        CheckReport& r)
{
    const auto& d = ctx->d();
    if (!at_invariant_point(*ctx)) {
        r.diagnostics["reason"] = "closed forms hold at xi = -rho_mu only";
        return;
    }
    const double tol = cfg.tolerance("closed_form_equiv");
    auto f = s.symmetrize(s.exponential_sum());
    std::vector<Part> parts;
    auto run = [&](const std::string& name, const DROperator& a, const DROperator& b) {
        Tracker t;
        compare(t, a, b, f, s, cfg.sample_points, cfg.sample_imag);
        parts.push_back({name, t.worst, tol, t.samples});
    };
    for (std::size_t i = 0; i < d.weight_basis().size(); ++i) {
        const RVec lam = -d.weight_basis()[i];
        if (!d.in_M_hat(lam) || !is_minuscule(d, d.weight_basis()[i])) continue;
        run("minuscule -lambda_" + std::to_string(i + 1), minuscule_closed_form(ctx, lam), y_operator(ctx, lam));
    }
    try {
        auto q = quasi_minuscule_closed_form(ctx);
        run("quasi_minuscule", q, y_operator(ctx, -d.quasi_minuscule_weight()));
    } catch (const std::invalid_argument& e) {
        r.diagnostics["quasi_minuscule"] = e.what();
    }
    if (d.type().family == 'A' && d.type().r == 1)
        run("explicit_type_A", explicit_a1_operator(ctx), minuscule_closed_form(ctx, -d.weight_basis()[0]));
    fill(r, parts);
}

void check_bar(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s, CheckReport& r)
{
    const auto& d = ctx->d();
    const double tol = cfg.tolerance("bar_representation");
    auto f = s.exponential_sum();
    std::vector<Part> parts;
    {
        Tracker t;
        std::vector<ReducedWord> words;
        for (const auto& w : d.weight_basis()) words.push_back(reduced_word(d, translation(-w)));
        ReducedWord extra{{0, 1, 0}, ExtendedWeylElement::identity(d.rank())};
        if (length(d, evaluate(d, extra)) == 3) words.push_back(extra);
        for (const auto& w : words) compare(t, bar_product(ctx, w), bar_product_expected(ctx, w), f, s, cfg.sample_points, cfg.sample_imag);
        parts.push_back({"product_identity", t.worst, tol, t.samples});
        r.diagnostics["worst_point"] = cjson(t.point);
    }
    // Collapse at the invariant point with the scenario's couplings and level.
    auto inv = std::make_shared<const OperatorContext>(
        OperatorContext::invariant(ctx->datum, ctx->couplings, cfg.level, ctx->tau, ctx->series));
    parts.push_back({"xi_collapse", inv->big_xi().norm(), tol, 1});
    double lam_err = 0.0;
    const cplx h = inv->h_vee();
    Tracker t;
    for (const auto& w : d.weight_basis()) {
        const RVec lam = -w;
        CVec lp = CVec::Zero(d.rank());
        for (const auto& a : d.translation_inversion_set(lam)) lp -= inv->mu(a.fin) * to_cvec(a.fin);
        lp /= h;
        lam_err = std::max(lam_err, (lp - to_cvec(lam)).norm() / std::max(1.0, to_cvec(lam).norm()));
        compare(t, bar_y_operator(inv, lam), y_operator(inv, lam), f, s, cfg.sample_points, cfg.sample_imag);
    }
    parts.push_back({"lambda_collapse", lam_err, tol, static_cast<int>(d.weight_basis().size())});
    parts.push_back({"bar_y_equals_y", t.worst, tol, t.samples});
    fill(r, parts);
}

std::map<ExtendedWeylElement, int> bfs_lengths(const AffineRootDatum& d, int max_len)
{
    std::map<ExtendedWeylElement, int> dist;
    std::deque<ExtendedWeylElement> q;
    const auto id = ExtendedWeylElement::identity(d.rank());
    dist[id] = 0;
    q.push_back(id);
    while (!q.empty()) {
        const auto w = q.front();
        q.pop_front();
        const int dw = dist[w];
        if (dw == max_len) continue;
        for (int i = 0; i <= d.rank(); ++i) {
            auto n = compose(w, simple_reflection(d, i));
            if (dist.emplace(n, dw + 1).second) q.push_back(n);
        }
    }
    return dist;
}

const std::map<std::string, std::pair<int, int>>& length_table()
{
    static const std::map<std::string, std::pair<int, int>> t = {{"A2~1", {2, 2}},  {"C2~1", {3, 4}},
                                                                  {"G2~1", {6, 10}}, {"A4~2", {6, 4}},
                                                                  {"D3~2", {4, 3}},  {"D4~3", {10, 6}}};
    return t;
}

void check_lengths(const ScenarioConfig& cfg, const AffineRootDatum& d, Sampler& s, CheckReport& r)
{
    const double tol = cfg.tolerance("lengths_vs_bfs");
    std::vector<Part> parts;

    const auto dist = bfs_lengths(d, kBfsDepth);
    int bad = 0;
    for (const auto& [w, n] : dist) bad += length(d, w) != n;
    parts.push_back({"bfs_depth_8", static_cast<double>(bad), tol, static_cast<int>(dist.size())});

    auto it = length_table().find(d.type().name());
    if (it != length_table().end()) {
        const int l1 = d.translation_length(-d.weight_basis()[0]);
        const int l2 = d.translation_length(-d.weight_basis()[1]);
        const int mism = (l1 != it->second.first) + (l2 != it->second.second);
        parts.push_back({"translation_length_table", static_cast<double>(mism), tol, 2});
        r.diagnostics["translation_lengths"] = {l1, l2};
    }

    std::uniform_int_distribution<int> num(-40, 40), den(1, 12), coef(0, 2);
    auto& g = s.rng();
    int wrong = 0;
    for (int trial = 0; trial < kIdentityTrials; ++trial) {
        std::vector<Rational> mu;
        for (int c = 0; c < d.num_classes(); ++c) mu.emplace_back(num(g), den(g));
        RVec lam(static_cast<std::size_t>(d.rank()), Rational(0));
        for (const auto& w : d.weight_basis()) lam = lam - Rational(coef(g)) * w;
        RVec lhs(static_cast<std::size_t>(d.rank()), Rational(0));
        for (const auto& a : d.translation_inversion_set(lam)) lhs = lhs - mu[static_cast<std::size_t>(d.root_class(a.fin))] * a.fin;
        wrong += !(lhs == h_vee_mu(d, mu) * lam);
    }
    parts.push_back({"inversion_sum_identity", static_cast<double>(wrong), tol, kIdentityTrials});
    fill(r, parts);
    r.diagnostics["bfs_elements"] = dist.size();
}

void check_theta(const ScenarioConfig& cfg, const AffineRootDatum& d, Sampler& s, CheckReport& r,
                 const SeriesConfig& series)
{
    std::vector<Part> parts;

    double eta_err = 0.0;
    for (int i = 0; i < 10; ++i) {
        const cplx tau(s.uniform(-0.5, 0.5), s.uniform(0.6, 1.6));
        const cplx ratio = theta1_derivative_series(tau, series) / std::pow(eta(tau, series), 3);
        eta_err = std::max(eta_err, std::abs(ratio - 2.0 * kPi) / (2.0 * kPi));
    }
    parts.push_back({"theta1_prime_over_eta_cubed", eta_err, cfg.tolerance("theta_eta_ratio"), 10});

    const cplx tau = cfg.tau;
    const int l = d.rank();
    const int k = cfg.level;
    Tracker t;
    for (const auto& th : theta_basis(d, k, tau, series)) {
        for (int p = 0; p < 3; ++p) {
            const CVec x = s.point(cfg.sample_imag) / static_cast<double>(l);
            const cplx v = th(x);
            for (int i = 0; i < l; ++i) {
                const RVec cv = d.coroot(d.unit(i));
                CVec y = x;
                for (int j = 0; j < l; ++j) y[j] += to_double(cv[static_cast<std::size_t>(j)]);
                const cplx vy = th(y);
                t.add(std::abs(vy - v), std::max(std::abs(v), std::abs(vy)), x, "coroot shift " + std::to_string(i + 1));
                RVec b(static_cast<std::size_t>(l));
                for (int j = 0; j < l; ++j) b[static_cast<std::size_t>(j)] = d.M_basis()(i, j);
                CVec z = x;
                cplx bx = 0.0;
                for (int j = 0; j < l; ++j) {
                    z[j] += tau * to_double(b[static_cast<std::size_t>(j)]);
                    bx += to_double(d.pair(b, d.unit(j))) * x[j];
                }
                const cplx factor = std::exp(-kI * kPi * tau * static_cast<double>(k) * to_double(d.norm2(b)) -
                                             2.0 * kPi * kI * static_cast<double>(k) * bx);
                const cplx vz = th(z);
                t.add(std::abs(vz - factor * v), std::max(std::abs(vz), std::abs(factor * v)), x,
                      "lattice shift " + std::to_string(i + 1));
            }
        }
    }
    parts.push_back({"heisenberg", t.worst, cfg.tolerance("theta_quasiperiodicity"), t.samples});
    if (t.point.size() > 0) r.diagnostics["worst_point"] = cjson(t.point);

    double wp_err = 0.0;
    for (int i = 0; i < 10; ++i) {
        const cplx z(s.uniform(-1.0, 1.0), s.uniform(-0.3, 0.3));
        const double gamma = (i % 3) + 1;
        const cplx T = gamma * tau;
        const cplx expect = -wp_lattice_difference(z, T / 2.0, T) / (4.0 * kPi * kPi);
        wp_err = std::max(wp_err, std::abs(wp0(z, gamma, tau, series) - expect) / std::max(1.0, std::abs(expect)));
    }
    parts.push_back({"wp0_lattice_sum", wp_err, cfg.tolerance("theta_wp0"), 10});
    fill(r, parts);
}

void check_leading_term(const ScenarioConfig& cfg, const std::shared_ptr<const OperatorContext>& ctx, Sampler& s,
                        CheckReport& r)
{
    const auto& d = ctx->d();
    Tracker t;
    for (std::size_t i = 0; i < d.weight_basis().size(); ++i) {
        const RVec lam = -d.weight_basis()[i];
        auto y = y_operator(ctx, lam);
        auto lt = leading_term(ctx, lam);
        const GroupElement key = GroupElement::from(translation(lam));
        for_points(s, cfg.sample_points, cfg.sample_imag, [&](const CVec& x) {
            const cplx want = lt.coefficient(key, x);
            t.add(std::abs(y.coefficient(key, x) - want), std::abs(want), x, "-lambda_" + std::to_string(i + 1));
        });
    }
    fill(r, t, cfg.tolerance("leading_term"));
}

// Column-scaled least squares of op(f_j) on the span of f_1..f_d.
struct Fit {
    double residual = 0.0;
    int rank = 0;
    int points = 0;
    // max over samples of scale / |value|: digits lost to cancellation inside the operator
    double cancellation = 0.0;
    Eigen::MatrixXcd coefficients;
};

Fit fit_on_span(const DROperator& op, const std::vector<SymmetricTheta>& basis, Sampler& s, int n, double imag)
{
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd A(n, dim), B(n, dim);
    std::vector<TestFunction> fs;
    for (const auto& b : basis) fs.push_back([&b](const CVec& x) { return b(x); });
    struct Row {
        Eigen::VectorXcd a, b;
        double cancellation;
    };
    std::vector<Row> rows;
    for_points(s, n * kCandidateFactor, imag, [&](const CVec& x0) {
        CVec x = x0;
        for (int attempt = 0; wall_distance(op, x) < kWallMargin && attempt < kPoleRetries; ++attempt) x = s.point(imag);
        Row r{Eigen::VectorXcd(dim), Eigen::VectorXcd(dim), 0.0};
        for (Eigen::Index j = 0; j < dim; ++j) {
            r.a[j] = basis[static_cast<std::size_t>(j)](x);
            const Applied v = op.apply(fs[static_cast<std::size_t>(j)], x);
            r.b[j] = v.value;
            r.cancellation = std::max(r.cancellation, v.scale / std::abs(v.value));
        }
        rows.push_back(std::move(r));
    });
    // draw order, except that candidates losing more than kMaxCancellation are used last
    std::stable_partition(rows.begin(), rows.end(), [](const Row& r) { return r.cancellation <= kMaxCancellation; });
    const auto good = std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.cancellation <= kMaxCancellation; });
    std::stable_sort(rows.begin() + good, rows.end(), [](const Row& l, const Row& r) { return l.cancellation < r.cancellation; });
    double cancellation = 0.0;
    for (int p = 0; p < n; ++p) {
        const auto& r = rows[static_cast<std::size_t>(p)];
        A.row(p) = r.a.transpose();
        B.row(p) = r.b.transpose();
        cancellation = std::max(cancellation, r.cancellation);
    }
    Eigen::VectorXd sc = A.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < dim; ++j)
        if (sc[j] == 0.0) sc[j] = 1.0;
    const Eigen::MatrixXcd As = A * sc.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(As);
    qr.setThreshold(1e-10);
    Fit out;
    out.rank = static_cast<int>(qr.rank());
    out.points = n;
    out.cancellation = cancellation;
    out.coefficients.resize(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Eigen::VectorXcd c = qr.solve(B.col(j));
        const double nb = B.col(j).norm();
        out.residual = std::max(out.residual, nb > 0.0 ? (As * c - B.col(j)).norm() / nb : 0.0);
        // f_j maps to sum_i c_i f_i with unscaled basis
        out.coefficients.row(j) = (sc.cwiseInverse().asDiagonal() * c).transpose();
    }
    return out;
}

nlohmann::json matrix_json(const Eigen::MatrixXcd& m)
{
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cjson(m(i, j)));
        out.push_back(row);
    }
    return out;
}

Fit fit_with_retry(const DROperator& op, const std::vector<SymmetricTheta>& basis, const ScenarioConfig& cfg,
                   std::uint64_t seed, const AffineRootDatum& d)
{
    const int n = std::max(3 * static_cast<int>(basis.size()), cfg.sample_points);
    for (int attempt = 0; attempt < kRankRetries; ++attempt) {
        Sampler s(d, seed + static_cast<std::uint64_t>(attempt));
        Fit f = fit_on_span(op, basis, s, n, cfg.sample_imag);
        if (f.rank == static_cast<int>(basis.size())) return f;
    }
    throw std::runtime_error("closure fit: sample matrix stays rank deficient after resampling");
}

}  // namespace

// ------------------------------------------------------------------ config

double ScenarioConfig::tolerance(const std::string& check) const
{
    if (auto it = tolerances.find(check); it != tolerances.end()) return it->second;
    if (auto it = default_tolerances().find(check); it != default_tolerances().end()) return it->second;
    throw ConfigError("no tolerance for '" + check + "'");
}

nlohmann::json ScenarioConfig::to_json() const
{
    static const char* modes[] = {"generic", "invariant", "manual"};
    nlohmann::json j;
    j["type"] = type;
    j["level"] = level;
    j["mode"] = modes[static_cast<int>(mode)];
    auto m = nlohmann::json::array();
    for (cplx v : mu) m.push_back(cjson(v));
    j["mu"] = m;
    auto z = nlohmann::json::array();
    for (const auto& row : zeta) {
        auto r = nlohmann::json::array();
        for (cplx v : row) r.push_back(cjson(v));
        z.push_back(r);
    }
    j["zeta"] = z;
    j["xi"] = xi ? cjson(*xi) : nlohmann::json(nullptr);
    j["kappa"] = kappa ? cjson(*kappa) : nlohmann::json(nullptr);
    j["kappa_factor"] = kappa_factor;
    j["tau"] = cjson(tau);
    j["sample_points"] = sample_points;
    j["sample_imag"] = sample_imag;
    j["seed"] = seed;
    nlohmann::json tol = default_tolerances();
    for (const auto& [k, v] : tolerances) tol[k] = v;
    j["tolerances"] = tol;
    if (a2l) {
        auto arr = [](const std::array<cplx, 4>& a) {
            auto o = nlohmann::json::array();
            for (cplx v : a) o.push_back(cjson(v));
            return o;
        };
        j["boundary"] = {{"nu", arr(a2l->nu)}, {"nubar", arr(a2l->nubar)}, {"mu", cjson(a2l->mu)}};
    }
    j["series"] = {{"max_terms", series.max_terms}, {"tail_tol", series.tail_tol}, {"pole_guard", series.pole_guard}};
    if (translation_sign != 1.0) j["translation_sign"] = translation_sign;
    return j;
}

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "skipped";
    }
}

const std::vector<std::string>& known_checks()
{
    static const std::vector<std::string> names = {"yang_baxter",       "unitarity",          "reduced_word_independence",
                                                   "commutativity",     "weyl_invariance",    "closed_form_equiv",
                                                   "bar_representation", "lengths_vs_bfs",    "theta_quasiperiodicity",
                                                   "theta_closure",     "leading_term"};
    return names;
}

std::vector<std::string> default_checks() { return known_checks(); }

std::shared_ptr<const OperatorContext> make_context(const ScenarioConfig& cfg)
{
    std::shared_ptr<const AffineRootDatum> d;
    try {
        d = std::make_shared<const AffineRootDatum>(cfg.type);
    } catch (const std::exception& e) {
        throw ConfigError("bad type '" + cfg.type + "': " + e.what());
    }
    if (cfg.level < 1) throw ConfigError("level must be a positive integer");
    if (cfg.tau.imag() < cfg.series.im_tau_floor)
        throw ConfigError("Im tau must be at least " + std::to_string(cfg.series.im_tau_floor));
    if (cfg.sample_points < 1) throw ConfigError("sample_points must be positive");

    CouplingParams c = CouplingParams::uniform(*d, 0.0);
    if (cfg.mu.empty()) {
        for (std::size_t i = 0; i < c.mu.size(); ++i) c.mu[i] = 0.3 + 0.07 * static_cast<double>(i);
    } else {
        if (cfg.mu.size() != c.mu.size())
            throw ConfigError("mu needs " + std::to_string(c.mu.size()) + " values (one per root class)");
        c.mu = cfg.mu;
    }
    if (!cfg.zeta.empty()) c.zeta = cfg.zeta;
    try {
        c.validate(*d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    OperatorContext ctx;
    switch (cfg.mode) {
    case SpectralMode::Invariant:
        if (cfg.xi || cfg.kappa) throw ConfigError("invariant mode fixes xi and kappa; remove the manual values");
        ctx = OperatorContext::invariant(d, c, cfg.level, cfg.tau, cfg.series);
        break;
    case SpectralMode::Generic: {
        if (cfg.xi) throw ConfigError("generic mode draws xi; use manual mode to set it");
        ctx.datum = d;
        ctx.couplings = c;
        ctx.tau = cfg.tau;
        ctx.series = cfg.series;
        std::vector<cplx> avoid{0.0};
        for (cplx m : c.mu) avoid.push_back(m);
        Sampler s(*d, cfg.seed);
        ctx.spectral.xi = s.generic_weight(avoid);
        ctx.spectral.kappa = cfg.kappa.value_or(0.37);
        break;
    }
    case SpectralMode::Manual:
        if (!cfg.xi || !cfg.kappa) throw ConfigError("manual mode needs xi and kappa");
        if (cfg.xi->size() != d->rank()) throw ConfigError("xi needs " + std::to_string(d->rank()) + " entries");
        ctx.datum = d;
        ctx.couplings = c;
        ctx.tau = cfg.tau;
        ctx.series = cfg.series;
        ctx.spectral.xi = *cfg.xi;
        ctx.spectral.kappa = *cfg.kappa;
        break;
    }
    ctx.spectral.kappa *= cfg.kappa_factor;
    ctx.translation_sign = cfg.translation_sign;
    return std::make_shared<const OperatorContext>(ctx);
}

// ------------------------------------------------------------------ runner

CheckReport run_theta_closure(const ScenarioConfig& cfg)
{
    CheckReport r;
    r.name = "theta_closure";
    const auto t0 = std::chrono::steady_clock::now();
    auto ctx = make_context(cfg);
    const auto& d = ctx->d();
    if (cfg.mode != SpectralMode::Invariant) {
        r.diagnostics["reason"] = "closure is stated for invariant mode";
        return r;
    }
    const auto basis = symmetrize_basis(d, cfg.level, ctx->tau, ctx->series);
    const std::uint64_t seed = check_seed(cfg, r.name);
    r.diagnostics["basis_size"] = basis.size();
    r.diagnostics["raw_basis_size"] = theta_basis(d, cfg.level, ctx->tau, ctx->series).size();
    r.diagnostics["kappa"] = cjson(ctx->spectral.kappa);

    std::vector<Part> parts;
    auto fits = nlohmann::json::object();
    auto cancel = nlohmann::json::object();
    const double tol = cfg.tolerance("theta_closure");
    for (std::size_t i = 0; i < d.weight_basis().size(); ++i) {
        const Fit f = fit_with_retry(y_operator(ctx, -d.weight_basis()[i]), basis, cfg, seed + 101 * i, d);
        const std::string name = "Y^{-lambda_" + std::to_string(i + 1) + "}";
        parts.push_back({name, f.residual, tol, f.points});
        fits[name] = matrix_json(f.coefficients);
        cancel[name] = f.cancellation;
    }
    if (cfg.a2l) {
        if (!d.type().has_half_roots()) throw ConfigError("boundary couplings need type A_{2l}^(2)");
        auto bctx = with(*ctx, [&](OperatorContext& c) {
            c.spectral.kappa = a2_2l_level_kappa(*cfg.a2l, d.rank(), cfg.level) * cfg.kappa_factor;
        });
        const Fit f = fit_with_retry(explicit_a2_2l_operator(bctx, *cfg.a2l), basis, cfg, seed + 977, d);
        parts.push_back({"boundary_operator", f.residual, tol, f.points});
        fits["boundary_operator"] = matrix_json(f.coefficients);
        cancel["boundary_operator"] = f.cancellation;
        r.diagnostics["boundary_kappa"] = cjson(bctx->spectral.kappa);
    }
    fill(r, parts);
    r.diagnostics["fitted"] = fits;
    r.diagnostics["cancellation"] = cancel;
    if (cfg.timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

CheckReport run_check(const ScenarioConfig& cfg, const std::string& name)
{
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
        throw ConfigError("unknown check '" + name + "'");
    if (name == "theta_closure") {
        try {
            return run_theta_closure(cfg);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            CheckReport r;
            r.name = name;
            r.status = CheckStatus::Fail;
            r.diagnostics["numeric_error"] = e.what();
            return r;
        }
    }
    CheckReport r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    auto ctx = make_context(cfg);
    Sampler s(ctx->d(), check_seed(cfg, name));
    try {
        if (name == "yang_baxter") check_yang_baxter(cfg, ctx, s, r);
        else if (name == "unitarity") check_unitarity(cfg, ctx, s, r);
        else if (name == "reduced_word_independence") check_reduced_words(cfg, ctx, s, r);
        else if (name == "commutativity") check_commutativity(cfg, ctx, s, r);
        else if (name == "weyl_invariance") check_weyl_invariance(cfg, ctx, s, r);
        else if (name == "closed_form_equiv") check_closed_forms(cfg, ctx, s, r);
        else if (name == "bar_representation") check_bar(cfg, ctx, s, r);
        else if (name == "lengths_vs_bfs") check_lengths(cfg, ctx->d(), s, r);
        else if (name == "theta_quasiperiodicity") check_theta(cfg, ctx->d(), s, r, ctx->series);
        else if (name == "leading_term") check_leading_term(cfg, ctx, s, r);
    } catch (const PoleError& e) {
        r.status = CheckStatus::Fail;
        r.diagnostics["numeric_error"] = e.what();
    } catch (const TruncationError& e) {
        r.status = CheckStatus::Fail;
        r.diagnostics["numeric_error"] = e.what();
    }
    if (cfg.timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CheckReport> run_suite(const ScenarioConfig& cfg, const std::vector<std::string>& checks)
{
    for (const auto& c : checks)
        if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
            throw ConfigError("unknown check '" + c + "'");
    if (!checks.empty()) make_context(cfg);
    std::vector<CheckReport> out;
    for (const auto& c : checks) out.push_back(run_check(cfg, c));
    return out;
}

// ------------------------------------------------------------------ reports

nlohmann::json report_json(const ScenarioConfig& cfg, const std::vector<CheckReport>& reports)
{
    auto checks = nlohmann::json::array();
    for (const auto& r : reports)
        checks.push_back({{"name", r.name},
                          {"status", to_string(r.status)},
                          {"residual", r.residual},
                          {"scale", r.scale},
                          {"samples", r.samples},
                          {"seconds", r.seconds},
                          {"diagnostics", r.diagnostics}});
    return {{"scenario", cfg.to_json()}, {"checks", checks}};
}

std::string report_text(const ScenarioConfig& cfg, const std::vector<CheckReport>& reports)
{
    std::ostringstream os;
    os << "scenario " << cfg.type << " level " << cfg.level << " seed " << cfg.seed << "\n";
    for (const auto& r : reports) {
        char line[256];
        std::snprintf(line, sizeof line, "  %-26s %-7s residual %.3e  scale %.3e  samples %5d", r.name.c_str(),
                      to_string(r.status).c_str(), r.residual, r.scale, r.samples);
        os << line;
        if (cfg.timing) {
            std::snprintf(line, sizeof line, "  %.2fs", r.seconds);
            os << line;
        }
        if (r.diagnostics.contains("numeric_error")) os << "  numeric error: " << r.diagnostics["numeric_error"].get<std::string>();
        if (r.diagnostics.contains("reason")) os << "  (" << r.diagnostics["reason"].get<std::string>() << ")";
        os << "\n";
        if (r.diagnostics.contains("parts"))
            for (const auto& p : r.diagnostics["parts"]) {
                std::snprintf(line, sizeof line, "      %-32s %-4s residual %.3e  tol %.1e\n",
                              p["name"].get<std::string>().c_str(), p["pass"].get<bool>() ? "ok" : "FAIL",
                              p["residual"].get<double>(), p["tolerance"].get<double>());
                os << line;
            }
        if (r.status == CheckStatus::Fail && r.diagnostics.contains("worst_point"))
            os << "      worst point " << r.diagnostics["worst_point"].dump() << "\n";
    }
    return os.str();
}

std::string validate_report(const nlohmann::json& j)
{
    if (!j.is_object()) return "report is not an object";
    if (!j.contains("scenario") || !j["scenario"].is_object()) return "missing scenario object";
    if (!j.contains("checks") || !j["checks"].is_array()) return "missing checks array";
    for (const auto& k : {"type", "level", "mode", "tau", "seed", "tolerances"})
        if (!j["scenario"].contains(k)) return std::string("scenario lacks '") + k + "'";
    for (const auto& c : j["checks"]) {
        if (!c.is_object()) return "check entry is not an object";
        if (!c.contains("name") || !c["name"].is_string()) return "check lacks a name";
        const std::string n = c["name"];
        if (std::find(known_checks().begin(), known_checks().end(), n) == known_checks().end())
            return "unknown check '" + n + "'";
        if (!c.contains("status") || !c["status"].is_string()) return n + ": missing status";
        const std::string st = c["status"];
        if (st != "pass" && st != "fail" && st != "skipped") return n + ": bad status '" + st + "'";
        for (const auto& k : {"residual", "scale", "seconds"})
            if (!c.contains(k) || !c[k].is_number()) return n + ": '" + k + "' must be a number";
        if (!c.contains("samples") || !c["samples"].is_number_integer()) return n + ": samples must be an integer";
        if (!c.contains("diagnostics") || !c["diagnostics"].is_object()) return n + ": diagnostics must be an object";
    }
    return {};
}

// ------------------------------------------------------------------ parsing

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, const std::string& seps)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (seps.find(ch) != std::string::npos) {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

std::vector<cplx> parse_complex_list(const std::string& s)
{
    std::vector<cplx> out;
    for (const auto& part : split(s, " \t;")) out.push_back(parse_complex(part));
    return out;
}

std::array<cplx, 4> parse_four(const std::string& s)
{
    const auto v = parse_complex_list(s);
    if (v.size() != 4) throw ConfigError("expected four values in '" + s + "'");
    return {v[0], v[1], v[2], v[3]};
}

bool parse_bool(const std::string& s)
{
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw ConfigError("not a boolean: '" + s + "'");
}

}  // namespace

cplx parse_complex(const std::string& text)
{
    std::string s = trim(text);
    if (s.empty()) throw ConfigError("empty complex number");
    if (s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    if (auto comma = s.find(','); comma != std::string::npos)
        return {parse_double(trim(s.substr(0, comma))), parse_double(trim(s.substr(comma + 1)))};
    if (s.back() != 'i' && s.back() != 'j') return {parse_double(s), 0.0};
    s.pop_back();
    std::size_t cut = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;)
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            cut = p;
            break;
        }
    auto imag_of = [](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t);
    };
    if (cut == std::string::npos) return {0.0, imag_of(s)};
    return {parse_double(s.substr(0, cut)), imag_of(s.substr(cut))};
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig cfg)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key == "type") cfg.type = val;
        else if (key == "level") cfg.level = static_cast<int>(parse_double(val));
        else if (key == "mode") {
            if (val == "generic") cfg.mode = SpectralMode::Generic;
            else if (val == "invariant") cfg.mode = SpectralMode::Invariant;
            else if (val == "manual") cfg.mode = SpectralMode::Manual;
            else throw ConfigError("mode must be generic, invariant or manual");
        }
        else if (key == "mu") cfg.mu = parse_complex_list(val);
        else if (key == "zeta") {
            cfg.zeta.clear();
            for (const auto& row : split(val, "|")) cfg.zeta.push_back(parse_four(row));
        }
        else if (key == "xi") {
            const auto v = parse_complex_list(val);
            cfg.xi = Eigen::Map<const CVec>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        else if (key == "kappa") cfg.kappa = parse_complex(val);
        else if (key == "kappa_factor") cfg.kappa_factor = parse_double(val);
        else if (key == "tau") cfg.tau = parse_complex(val);
        else if (key == "sample_points") cfg.sample_points = static_cast<int>(parse_double(val));
        else if (key == "sample_imag") cfg.sample_imag = parse_double(val);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
        else if (key == "timing") cfg.timing = parse_bool(val);
        else if (key == "translation_sign") cfg.translation_sign = parse_double(val);
        else if (key == "series.max_terms") cfg.series.max_terms = static_cast<int>(parse_double(val));
        else if (key == "series.tail_tol") cfg.series.tail_tol = parse_double(val);
        else if (key == "series.pole_guard") cfg.series.pole_guard = parse_double(val);
        else if (key.rfind("tolerance.", 0) == 0) {
            const std::string check = key.substr(10);
            if (!default_tolerances().count(check)) throw ConfigError("unknown tolerance '" + check + "'");
            cfg.tolerances[check] = parse_double(val);
        }
        else if (key == "boundary.nu" || key == "boundary.nubar" || key == "boundary.mu") {
            if (!cfg.a2l) cfg.a2l = A2lParams{{}, {}, 0.3};
            if (key == "boundary.nu") cfg.a2l->nu = parse_four(val);
            else if (key == "boundary.nubar") cfg.a2l->nubar = parse_four(val);
            else cfg.a2l->mu = parse_complex(val);
        }
        else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

cplx wp_lattice_difference(cplx z, cplx w, cplx T, int terms)
{
    // The sum over the real period is done in closed form: sum_m (z+m)^{-2} = pi^2 / sin^2(pi z).
    cplx s = 0.0;
    for (int n = -terms; n <= terms; ++n) {
        const cplx a = std::sin(kPi * (z + static_cast<double>(n) * T)), b = std::sin(kPi * (w + static_cast<double>(n) * T));
        s += 1.0 / (a * a) - 1.0 / (b * b);
    }
    return kPi * kPi * s;
}

}  // namespace ermo
