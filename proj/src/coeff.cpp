#include "bcx/coeff.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace bcx {

namespace {

std::atomic<std::size_t> g_degree_cap{16};

IVec to_ivec(const std::vector<std::int64_t>& v)
{
    IVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[i];
    return out;
}

void check_key_shape(const Chart& chart, const MonoKey& key)
{
    if (key.q.size() != chart.k() || key.m.size() != chart.k() ||
        key.a.size() != chart.extra || key.b.size() != chart.extra)
        throw std::invalid_argument("MonoKey: wrong key dimensions for chart");
    std::size_t deg = 0;
    for (std::uint32_t e : key.a)
        deg += e;
    for (std::uint32_t e : key.b)
        deg += e;
    if (deg > degree_cap())
        raise(Errc::DegreeOverflow,
              "z-degree " + std::to_string(deg) + " exceeds cap " +
                  std::to_string(degree_cap()));
}

GRat gr_pow(const GRat& base, std::int64_t e, bool unit_modulus)
{
    GRat out{Rat(1), Rat(0)};
    GRat b = base;
    std::int64_t n = e;
    if (e < 0) {
        n = -e;
        if (unit_modulus)
            b = base.conj();
        else
            b = GRat{Rat(1), Rat(0)} / base;
    }
    for (std::int64_t i = 0; i < n; ++i)
        out = out * b;
    return out;
}

} // namespace

void set_degree_cap(std::size_t cap) { g_degree_cap.store(cap); }
std::size_t degree_cap() { return g_degree_cap.load(); }

Chart make_chart(const std::shared_ptr<const WeaklyToricMonoid>& p,
                 std::size_t additional_free)
{
    Chart c;
    if (p->is_sharp())
        c.sharp = p;
    else
        c.sharp = p->sharp_quotient();
    c.extra = p->unit_rank() + additional_free;
    return c;
}

bool same_chart(const Chart& a, const Chart& b)
{
    if (a.extra != b.extra)
        return false;
    if (a.sharp == b.sharp)
        return true;
    const auto& pa = a.sharp->presentation();
    const auto& pb = b.sharp->presentation();
    return pa.ambient_rank == pb.ambient_rank && pa.generators == pb.generators &&
           pa.relations == pb.relations;
}

void require_same_chart(const Chart& a, const Chart& b)
{
    if (!same_chart(a, b))
        raise(Errc::ChartMismatch, "operands live on different charts");
}

std::string to_string(const MonoKey& key)
{
    auto list = [](const auto& v) {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < v.size(); ++i)
            os << (i ? "," : "") << static_cast<std::int64_t>(v[i]);
        os << ")";
        return os.str();
    };
    return "q=" + list(key.q) + " m=" + list(key.m) + " a=" + list(key.a) +
           " b=" + list(key.b);
}

CoeffElement::CoeffElement(Chart chart) : chart_(std::move(chart)) {}

CoeffElement CoeffElement::constant(const Chart& chart, const GRat& c)
{
    MonoKey key;
    key.q.assign(chart.k(), 0);
    key.m.assign(chart.k(), 0);
    key.a.assign(chart.extra, 0);
    key.b.assign(chart.extra, 0);
    CoeffElement f(chart);
    f.insert_term(key, c);
    return f;
}

CoeffElement CoeffElement::monomial(const Chart& chart, const MonoKey& key,
                                    const GRat& c)
{
    check_key_shape(chart, key);
    IVec q_amb = chart.sharp->from_gp_coords(to_ivec(key.q));
    if (!chart.sharp->contains(q_amb))
        raise(Errc::NotInMonoid, "mu-key " + to_string(to_ivec(key.q)));
    CoeffElement f(chart);
    f.insert_term(key, c);
    return f;
}

CoeffElement CoeffElement::hol_monomial(const Chart& chart,
                                        const std::vector<std::int64_t>& q)
{
    MonoKey key;
    key.q = q;
    key.m = q;
    key.a.assign(chart.extra, 0);
    key.b.assign(chart.extra, 0);
    return monomial(chart, key, GRat{Rat(1), Rat(0)});
}

CoeffElement CoeffElement::z_var(const Chart& chart, std::size_t j)
{
    MonoKey key;
    key.q.assign(chart.k(), 0);
    key.m.assign(chart.k(), 0);
    key.a.assign(chart.extra, 0);
    key.b.assign(chart.extra, 0);
    key.a.at(j) = 1;
    CoeffElement f(chart);
    f.insert_term(key, GRat{Rat(1), Rat(0)});
    return f;
}

CoeffElement CoeffElement::zbar_var(const Chart& chart, std::size_t j)
{
    MonoKey key;
    key.q.assign(chart.k(), 0);
    key.m.assign(chart.k(), 0);
    key.a.assign(chart.extra, 0);
    key.b.assign(chart.extra, 0);
    key.b.at(j) = 1;
    CoeffElement f(chart);
    f.insert_term(key, GRat{Rat(1), Rat(0)});
    return f;
}

GRat CoeffElement::coefficient(const MonoKey& key) const
{
    auto it = terms_.find(key);
    if (it == terms_.end())
        return GRat{Rat(0), Rat(0)};
    return it->second;
}

void CoeffElement::insert_term(const MonoKey& key, const GRat& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = terms_.emplace(key, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

CoeffElement CoeffElement::operator+(const CoeffElement& o) const
{
    require_same_chart(chart_, o.chart_);
    CoeffElement out = *this;
    for (const auto& [key, c] : o.terms_)
        out.insert_term(key, c);
    return out;
}

CoeffElement& CoeffElement::operator+=(const CoeffElement& o)
{
    require_same_chart(chart_, o.chart_);
    for (const auto& [key, c] : o.terms_)
        insert_term(key, c);
    return *this;
}

CoeffElement CoeffElement::operator-() const
{
    CoeffElement out(chart_);
    for (const auto& [key, c] : terms_)
        out.terms_.emplace(key, GRat{-c.re, -c.im});
    return out;
}

CoeffElement CoeffElement::operator-(const CoeffElement& o) const
{
    return *this + (-o);
}

CoeffElement CoeffElement::operator*(const GRat& c) const
{
    CoeffElement out(chart_);
    if (c.is_zero())
        return out;
    for (const auto& [key, v] : terms_)
        out.insert_term(key, v * c);
    return out;
}

CoeffElement CoeffElement::operator*(const CoeffElement& o) const
{
    require_same_chart(chart_, o.chart_);
    CoeffElement out(chart_);
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) {
            MonoKey key;
            key.q.resize(k1.q.size());
            key.m.resize(k1.m.size());
            key.a.resize(k1.a.size());
            key.b.resize(k1.b.size());
            for (std::size_t i = 0; i < k1.q.size(); ++i) {
                key.q[i] = k1.q[i] + k2.q[i];
                key.m[i] = k1.m[i] + k2.m[i];
            }
            for (std::size_t i = 0; i < k1.a.size(); ++i) {
                key.a[i] = k1.a[i] + k2.a[i];
                key.b[i] = k1.b[i] + k2.b[i];
            }
            check_key_shape(chart_, key); // degree-cap guard
            out.insert_term(key, c1 * c2);
        }
    return out;
}

bool CoeffElement::operator==(const CoeffElement& o) const
{
    return same_chart(chart_, o.chart_) && terms_ == o.terms_;
}

CoeffElement CoeffElement::conjugate() const
{
    CoeffElement out(chart_);
    for (const auto& [key, c] : terms_) {
        MonoKey k = key;
        for (auto& mi : k.m)
            mi = -mi;
        std::swap(k.a, k.b);
        out.insert_term(k, c.conj());
    }
    return out;
}

bool CoeffElement::is_real() const { return *this == conjugate(); }

CoeffElement CoeffElement::restrict_V() const
{
    CoeffElement out(chart_);
    for (const auto& [key, c] : terms_) {
        bool zero_q = true;
        for (std::int64_t qi : key.q)
            zero_q = zero_q && qi == 0;
        if (zero_q)
            out.terms_.emplace(key, c);
    }
    return out;
}

CoeffElement
CoeffElement::divide_hol_monomial(const std::vector<std::int64_t>& q) const
{
    CoeffElement out(chart_);
    for (const auto& [key, c] : terms_) {
        MonoKey k = key;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (k.q[i] != q[i])
                throw std::logic_error("divide_hol_monomial: mu-key mismatch");
            k.q[i] = 0;
            k.m[i] -= q[i];
        }
        out.insert_term(k, c);
    }
    return out;
}

GRat eval_coeff(const CoeffElement& f, const ChartPoint& pt)
{
    const Chart& chart = f.chart();
    if (pt.theta_exp.size() != chart.k() || pt.z.size() != chart.extra)
        throw std::invalid_argument("eval_coeff: point has wrong dimensions");
    for (const GRat& t : pt.theta_exp)
        if (t.norm2() != Rat(1))
            throw std::invalid_argument("eval_coeff: theta value not unit modulus");
    GRat total{Rat(0), Rat(0)};
    for (const auto& [key, c] : f.terms()) {
        GRat v = c;
        Rat mu = eval_lambda(pt.base, chart.sharp->from_gp_coords(to_ivec(key.q)));
        v = v * GRat{mu, Rat(0)};
        if (v.is_zero())
            continue;
        for (std::size_t l = 0; l < chart.k(); ++l)
            v = v * gr_pow(pt.theta_exp[l], key.m[l], true);
        for (std::size_t j = 0; j < chart.extra; ++j) {
            v = v * gr_pow(pt.z[j], key.a[j], false);
            v = v * gr_pow(pt.z[j].conj(), key.b[j], false);
        }
        total = total + v;
    }
    return total;
}

std::complex<double> eval_coeff_f(const CoeffElement& f,
                                  const std::vector<double>& u)
{
    const Chart& chart = f.chart();
    const std::size_t k = chart.k(), n = chart.n();
    if (u.size() != 2 * n)
        throw std::invalid_argument("eval_coeff_f: expected 2n coordinates");
    std::complex<double> total = 0.0;
    for (const auto& [key, c] : f.terms()) {
        double log_mu = 0, arg = 0;
        for (std::size_t l = 0; l < k; ++l) {
            log_mu += static_cast<double>(key.q[l]) * u[l];
            arg += static_cast<double>(key.m[l]) * u[n + l];
        }
        std::complex<double> v =
            std::exp(std::complex<double>(log_mu, arg));
        for (std::size_t j = 0; j < chart.extra; ++j) {
            std::complex<double> z(u[k + j], u[n + k + j]);
            for (std::uint32_t e = 0; e < key.a[j]; ++e)
                v *= z;
            for (std::uint32_t e = 0; e < key.b[j]; ++e)
                v *= std::conj(z);
        }
        total += std::complex<double>(to_double(c.re), to_double(c.im)) * v;
    }
    return total;
}

std::string to_string(const CoeffElement& f)
{
    if (f.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : f.terms()) {
        if (!first)
            os << " + ";
        first = false;
        os << to_string(c) << "*[" << to_string(key) << "]";
    }
    return os.str();
}

} // namespace bcx
