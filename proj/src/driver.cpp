#include "bcx/driver.hpp"

#include "bcx/complex_structure.hpp"
#include "bcx/formal_nn.hpp"
#include "bcx/model_space.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bcx {

namespace {

[[noreturn]] void need(const std::string& what)
{
    raise(Errc::ParseError, "missing " + what + " required by this command");
}

Json ivec_json(const IVec& v)
{
    Json a = Json::array();
    for (const Int& x : v) {
        if (x <= Int(std::numeric_limits<std::int64_t>::max()) &&
            x >= Int(std::numeric_limits<std::int64_t>::min()))
            a.push_back(x.convert_to<std::int64_t>());
        else
            a.push_back(x.str());
    }
    return a;
}

Json order_json(const std::optional<unsigned>& o)
{
    return o ? Json(*o) : Json(nullptr);
}

std::optional<unsigned> covector_order(const BCovector& xi)
{
    std::optional<unsigned> best;
    for (const CoeffElement& f : xi.comp) {
        auto o = ideal_order(f).order;
        if (o && (!best || *o < *best))
            best = o;
    }
    return best;
}

std::vector<std::int64_t> gp_i64(const WeaklyToricMonoid& q, const IVec& amb)
{
    IVec gp = *q.gp_coords(amb);
    std::vector<std::int64_t> out(gp.size());
    for (std::size_t i = 0; i < gp.size(); ++i)
        out[i] = gp[i].convert_to<std::int64_t>();
    return out;
}

std::string monomial_text(const IVec& exps)
{
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0)
            continue;
        if (!s.empty())
            s += " ";
        s += "x" + std::to_string(i + 1);
        if (exps[i] != 1)
            s += "^" + exps[i].str();
    }
    return s.empty() ? "1" : s;
}

struct Built {
    std::shared_ptr<const WeaklyToricMonoid> monoid;
    Chart chart;
};

Built build_chart(const SpecFile& spec)
{
    if (!spec.monoid)
        need("a [monoid] section");
    auto p = std::make_shared<const WeaklyToricMonoid>(
        WeaklyToricMonoid::validate(spec.monoid->pres));
    return {p, make_chart(p, spec.monoid->free)};
}

BACS build_bacs(const Chart& chart, const SpecFile& spec,
                const JobSpec& job)
{
    if (!spec.bacs)
        return standard_structure(chart);
    const SpecBacs& sb = *spec.bacs;
    const std::size_t n = chart.n();
    std::vector<CoeffElement> entries;
    if (sb.standard_base) {
        entries = standard_structure(chart).mat;
    } else {
        entries.assign(4 * n * n, CoeffElement(chart));
    }
    for (const SpecBacsTerm& t : sb.terms) {
        auto bad = [&](const std::string& msg, const std::string& hint) {
            raise(Errc::ParseError, "line " + std::to_string(t.line) + ": " +
                                        msg + "; expected " + hint);
        };
        if (t.row >= 2 * n || t.col >= 2 * n)
            bad("term indexes frame direction " +
                    std::to_string(std::max(t.row, t.col)),
                "indices below " + std::to_string(2 * n));
        if (t.q.size() != chart.k() || t.m.size() != chart.k())
            bad("q/m of lengths " + std::to_string(t.q.size()) + "/" +
                    std::to_string(t.m.size()),
                "length " + std::to_string(chart.k()) + " (the toric rank)");
        if (t.a.size() != chart.extra || t.b.size() != chart.extra)
            bad("a/b of lengths " + std::to_string(t.a.size()) + "/" +
                    std::to_string(t.b.size()),
                "length " + std::to_string(chart.extra) +
                    " (the free coordinate count)");
        MonoKey key{t.q, t.m, t.a, t.b};
        entries[t.row * 2 * n + t.col] +=
            CoeffElement::monomial(chart, key, t.c);
    }
    return make_bacs(chart, std::move(entries), job.seed, job.samples);
}

std::vector<std::vector<SubstitutionTerm>>
build_substitutions(const Chart& chart, const SpecFile& spec)
{
    std::vector<std::vector<SubstitutionTerm>> subs(chart.extra);
    for (const SpecPerturbationTerm& t : *spec.perturbation) {
        auto bad = [&](const std::string& msg, const std::string& hint) {
            raise(Errc::ParseError, "line " + std::to_string(t.line) + ": " +
                                        msg + "; expected " + hint);
        };
        if (t.j >= chart.extra)
            bad("z index " + std::to_string(t.j),
                "an index below " + std::to_string(chart.extra));
        if (t.q.size() != chart.k() || t.m.size() != chart.k())
            bad("q/m of lengths " + std::to_string(t.q.size()) + "/" +
                    std::to_string(t.m.size()),
                "length " + std::to_string(chart.k()) + " (the toric rank)");
        subs[t.j].push_back({t.q, t.m, t.c});
    }
    return subs;
}

// ---- commands ----

Json cmd_monoid_analyze(const SpecFile& spec)
{
    if (!spec.monoid)
        need("a [monoid] section");
    auto p = WeaklyToricMonoid::validate(spec.monoid->pres);
    auto faces = enumerate_faces(p);

    Json res = Json::object();
    res["ambient_rank"] = p.ambient_rank();
    res["generator_count"] = p.presentation().generators.size();
    res["gp_rank"] = p.gp_rank();
    res["unit_rank"] = p.unit_rank();
    res["weakly_toric"] = true;
    res["toric"] = p.is_sharp();
    res["face_count"] = faces.size();

    std::map<std::size_t, std::size_t> multiset;
    for (const Face& f : faces)
        ++multiset[f.codim];
    Json ms = Json::object();
    for (const auto& [codim, count] : multiset)
        ms[std::to_string(codim)] = count;
    res["codim_multiset"] = std::move(ms);

    Json fl = Json::array();
    for (const Face& f : faces) {
        Json fj = Json::object();
        fj["generators"] = f.generator_indices;
        fj["codim"] = f.codim;
        fl.push_back(std::move(fj));
    }
    res["faces"] = std::move(fl);

    Json rel = Json::array();
    for (const auto& [a, b] : canonical_relations(
             p.presentation().generators, p.ambient_rank())) {
        Json rj = Json::object();
        rj["lhs"] = ivec_json(a);
        rj["rhs"] = ivec_json(b);
        rj["text"] = monomial_text(a) + " = " + monomial_text(b);
        rel.push_back(std::move(rj));
    }
    res["canonical_relations"] = std::move(rel);
    return res;
}

Json cmd_embed(const SpecFile& spec)
{
    if (!spec.monoid)
        need("a [monoid] section");
    auto p = WeaklyToricMonoid::validate(spec.monoid->pres);
    BinomialEmbedding be = embed(p);

    Json res = Json::object();
    res["ambient_dim"] = be.ambient_dim;
    Json eqs = Json::array();
    for (const auto& [a, b] : be.equations) {
        Json e = Json::object();
        e["lhs"] = ivec_json(a);
        e["rhs"] = ivec_json(b);
        e["text"] = monomial_text(a) + " = " + monomial_text(b);
        eqs.push_back(std::move(e));
    }
    res["equations"] = std::move(eqs);
    return res;
}

Json cmd_strata(const SpecFile& spec)
{
    if (!spec.monoid)
        need("a [monoid] section");
    if (!spec.points || spec.points->empty())
        need("a non-empty [points] section");
    auto p = std::make_shared<const WeaklyToricMonoid>(
        WeaklyToricMonoid::validate(spec.monoid->pres));
    const std::size_t m = p->presentation().generators.size();

    Json pts = Json::array();
    for (const SpecPoint& sp : *spec.points) {
        std::size_t got =
            sp.exact ? sp.exact_values.size() : sp.float_values.size();
        if (got != m)
            raise(Errc::ParseError,
                  "line " + std::to_string(sp.line) + ": point has " +
                      std::to_string(got) + " values; expected " +
                      std::to_string(m) + " (one per generator)");
        ModelPoint x = sp.exact ? ModelPoint::make_exact(p, sp.exact_values)
                                : ModelPoint::make_float(p, sp.float_values);
        StratumDescriptor d = support_and_depth(x);
        Json pj = Json::object();
        pj["kind"] = sp.exact ? "exact" : "float";
        Json vals = Json::array();
        if (sp.exact)
            for (const Rat& v : sp.exact_values)
                vals.push_back(rat_to_string(v));
        else
            for (double v : sp.float_values)
                vals.push_back(v);
        pj["values"] = std::move(vals);
        pj["support_face"] = d.face.generator_indices;
        pj["depth"] = d.depth;
        pj["stratum_dim"] = d.dim;
        pts.push_back(std::move(pj));
    }
    Json res = Json::object();
    res["points"] = std::move(pts);
    return res;
}

Json cmd_bracket(const SpecFile& spec, const JobSpec& job)
{
    Built b = build_chart(spec);
    BACS j = build_bacs(b.chart, spec, job);
    const std::size_t dim = 2 * b.chart.n();

    bool frame_commutes = true;
    for (std::size_t r = 0; r < dim && frame_commutes; ++r)
        for (std::size_t c = r + 1; c < dim && frame_commutes; ++c)
            if (!lie_bracket(BVectorField::frame_field(b.chart, r),
                             BVectorField::frame_field(b.chart, c))
                     .is_zero())
                frame_commutes = false;

    Json pairs = Json::array();
    std::size_t nonzero = 0;
    std::vector<BVectorField> img;
    for (std::size_t i = 0; i < dim; ++i)
        img.push_back(j.column(i));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c) {
            BVectorField br = lie_bracket(img[r], img[c]);
            std::size_t nz = 0;
            for (const CoeffElement& f : br.comp)
                if (!f.is_zero())
                    ++nz;
            if (nz == 0)
                continue;
            ++nonzero;
            Json pj = Json::object();
            pj["i"] = r;
            pj["j"] = c;
            pj["nonzero_components"] = nz;
            pairs.push_back(std::move(pj));
        }

    Json res = Json::object();
    res["frame_pairs_commute"] = frame_commutes;
    res["j_image_noncommuting_pairs"] = nonzero;
    res["pairs"] = std::move(pairs);
    return res;
}

Json cmd_nijenhuis(const SpecFile& spec, const JobSpec& job)
{
    Built b = build_chart(spec);
    BACS j = build_bacs(b.chart, spec, job);
    NijenhuisTensor n = nijenhuis(j);

    Json res = Json::object();
    res["integrable"] = n.is_zero();
    res["nonzero_component_count"] = n.comp.size();
    Json comps = Json::array();
    for (const auto& [ij, field] : n.comp) {
        Json cj = Json::object();
        cj["i"] = ij.first;
        cj["j"] = ij.second;
        std::optional<unsigned> best;
        for (const CoeffElement& f : field.comp) {
            auto o = ideal_order(f).order;
            if (o && (!best || *o < *best))
                best = o;
        }
        cj["min_order"] = order_json(best);
        comps.push_back(std::move(cj));
    }
    res["components"] = std::move(comps);
    return res;
}

Json cmd_dbar(const SpecFile& spec, const JobSpec& job)
{
    Built b = build_chart(spec);
    BACS j = build_bacs(b.chart, spec, job);

    Json funcs = Json::array();
    for (const IVec& irr : b.chart.sharp->irreducibles()) {
        std::vector<std::int64_t> q = gp_i64(*b.chart.sharp, irr);
        CoeffElement f = CoeffElement::hol_monomial(b.chart, q);
        Json fj = Json::object();
        fj["q"] = q;
        fj["residual_order"] = order_json(covector_order(dbar(j, f)));
        funcs.push_back(std::move(fj));
    }
    for (std::size_t zi = 0; zi < b.chart.extra; ++zi) {
        Json fj = Json::object();
        fj["z"] = zi + 1;
        fj["residual_order"] = order_json(
            covector_order(dbar(j, CoeffElement::z_var(b.chart, zi))));
        funcs.push_back(std::move(fj));
    }
    Json res = Json::object();
    res["holomorphic_generators"] = std::move(funcs);
    return res;
}

Json cmd_normal_form(const SpecFile& spec, const JobSpec& job)
{
    Built b = build_chart(spec);
    BACS j = build_bacs(b.chart, spec, job);
    NormalFormReport rep = verify_normal_form(j, standard_candidate(b.chart));

    auto check = [&](bool ok, const std::string& witness) {
        Json c = Json::object();
        c["pass"] = ok;
        if (!ok)
            c["witness"] = witness;
        return c;
    };
    Json res = Json::object();
    res["normal_flat"] = check(rep.normal_flat_ok, rep.normal_witness);
    res["commuting_frame"] = check(rep.commute_ok, rep.commute_witness);
    res["anchors"] = check(rep.anchor_ok, rep.anchor_witness);
    res["j_relations"] = check(rep.j_relations_ok, rep.j_witness);
    res["omega_zero"] = rep.omega_zero;
    res["normal_form"] = rep.all_ok();
    return res;
}

Json cmd_nn_correct(const SpecFile& spec, const JobSpec& job)
{
    if (!spec.perturbation && !spec.bacs)
        need("a [perturbation] or [bacs] section");
    Built b = build_chart(spec);
    BACS j = spec.perturbation
                 ? pullback_structure(b.chart,
                                      build_substitutions(b.chart, spec),
                                      job.seed)
                 : build_bacs(b.chart, spec, job);

    std::vector<GRat> gauge;
    if (spec.seed) {
        if (spec.seed->gauge.size() != b.chart.k())
            raise(Errc::ParseError,
                  "line " + std::to_string(spec.seed->lines.front()) +
                      ": [seed-chart] has " +
                      std::to_string(spec.seed->gauge.size()) +
                      " gauge constants; expected " +
                      std::to_string(b.chart.k()) +
                      " (one per toric direction)");
        for (std::size_t i = 0; i < spec.seed->gauge.size(); ++i)
            if (spec.seed->gauge[i].norm2() != Rat(1))
                raise(Errc::ParseError,
                      "line " + std::to_string(spec.seed->lines[i]) +
                          ": gauge constant is not unit-modulus; expected "
                          "|re|^2+|im|^2 = 1");
        gauge = spec.seed->gauge;
    }

    auto [fam, cc] =
        correct_to_order(j, standard_seed(b.chart), job.order, gauge);

    Json res = Json::object();
    res["order"] = job.order;
    res["order_reached"] = fam.order_reached;
    Json gj = Json::array();
    for (const GRat& g : cc.gauge)
        gj.push_back(grat_to_string(g));
    res["gauge"] = std::move(gj);

    Json gcorr = Json::array();
    for (const auto& [key, f] : fam.g) {
        Json e = Json::object();
        e["direction"] = key.first + 1;
        e["q"] = key.second;
        e["element"] = coeff_to_json(f);
        gcorr.push_back(std::move(e));
    }
    Json hcorr = Json::array();
    for (const auto& [key, f] : fam.h) {
        Json e = Json::object();
        e["z"] = key.first + 1;
        e["q"] = key.second;
        e["element"] = coeff_to_json(f);
        hcorr.push_back(std::move(e));
    }
    Json corr = Json::object();
    corr["g"] = std::move(gcorr);
    corr["h"] = std::move(hcorr);
    res["corrections"] = std::move(corr);

    bool all_ok = true;
    Json mono = Json::array();
    for (const auto& [q, f] : cc.mu) {
        auto o = covector_order(dbar(j, f));
        bool ok = !o || *o >= job.order;
        all_ok = all_ok && ok;
        Json e = Json::object();
        e["q"] = q;
        e["residual_order"] = order_json(o);
        e["ok"] = ok;
        mono.push_back(std::move(e));
    }
    res["monomials"] = std::move(mono);

    Json zs = Json::array();
    for (std::size_t zi = 0; zi < cc.z.size(); ++zi) {
        auto o = covector_order(dbar(j, cc.z[zi]));
        bool ok = !o || *o >= job.order;
        all_ok = all_ok && ok;
        Json e = Json::object();
        e["z"] = zi + 1;
        e["residual_order"] = order_json(o);
        e["ok"] = ok;
        e["element"] = coeff_to_json(cc.z[zi]);
        zs.push_back(std::move(e));
    }
    res["z_coordinates"] = std::move(zs);
    res["all_residuals_ok"] = all_ok;
    return res;
}

} // namespace

Report run(const JobSpec& job)
{
    set_degree_cap(job.degree_cap);

    std::ifstream in(job.input_path, std::ios::binary);
    if (!in)
        raise(Errc::ParseError, "cannot open input file: " + job.input_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();

    Report r;
    r.command = job.command;
    r.input_digest = digest_hex(bytes);
    const bool uses_j = job.command == "bracket" ||
                        job.command == "nijenhuis" || job.command == "dbar" ||
                        job.command == "normal-form" ||
                        job.command == "nn-correct";
    if (job.command == "nn-correct")
        r.options["order"] = job.order;
    if (uses_j) {
        r.options["samples"] = job.samples;
        r.options["seed"] = job.seed;
    }
    r.options["threads"] = job.threads;
    r.options["degree_cap"] = job.degree_cap;
    if (job.threads > 1)
        r.diagnostics.push_back(
            "threads > 1 requested; this build runs single-threaded for "
            "determinism");

    SpecFile spec = parse_spec(bytes);

    if (job.command == "monoid-analyze")
        r.results = cmd_monoid_analyze(spec);
    else if (job.command == "embed")
        r.results = cmd_embed(spec);
    else if (job.command == "strata")
        r.results = cmd_strata(spec);
    else if (job.command == "bracket")
        r.results = cmd_bracket(spec, job);
    else if (job.command == "nijenhuis")
        r.results = cmd_nijenhuis(spec, job);
    else if (job.command == "dbar")
        r.results = cmd_dbar(spec, job);
    else if (job.command == "normal-form")
        r.results = cmd_normal_form(spec, job);
    else if (job.command == "nn-correct")
        r.results = cmd_nn_correct(spec, job);
    else
        throw std::invalid_argument("unknown command: " + job.command);
    return r;
}

int run_cli(const JobSpec& job, std::ostream& out, std::ostream& err)
{
    auto t0 = std::chrono::steady_clock::now();
    try {
        Report r = run(job);
        double dt = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        out << (job.json ? report_to_json(r) : report_to_text(r, dt));
        return 0;
    } catch (const Error& e) {
        if (e.code() == Errc::ParseError) {
            err << "parse error: " << e.witness() << "\n";
            return 1;
        }
        Report r;
        r.command = job.command;
        std::ifstream in(job.input_path, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            r.input_digest = digest_hex(ss.str());
        }
        r.results["error"] = errc_name(e.code());
        r.results["witness"] = e.witness();
        out << (job.json ? report_to_json(r) : report_to_text(r));
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace bcx
