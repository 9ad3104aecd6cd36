#include "fheight/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "fheight/drinfeld.hpp"
#include "fheight/elliptic.hpp"
#include "fheight/error.hpp"
#include "fheight/expr.hpp"

namespace fheight::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"drinfeld-height", "drinfeld-sweep", "drinfeld-torsion", "ec-profile",
                                            "ec-height",       "ec-census",      "ec-integral",      "ec-report"};

// Input problems detected after parsing; reported like a parse failure.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string frac(const BigRational& r) { return to_fraction_string(r); }

json config_json(const JobConfig& c) {
    json j;
    j["command"] = c.command;
    j["q"] = c.q;
    j["seed"] = c.seed;
    j["cap"] = c.cap;
    j["width"] = c.width;
    if (c.command.rfind("drinfeld", 0) == 0) {
        j["phi"] = c.phi;
        j["minpoly"] = c.minpolys;
        if (c.command == "drinfeld-sweep") {
            j["max_degree"] = c.max_degree;
            j["constants"] = c.constants;
        } else {
            j["alpha"] = c.alpha;
        }
        j["torsion_bound"] = c.torsion_bound;
    } else {
        j["B"] = c.B;
        j["C"] = c.C;
        j["generate"] = c.generate;
        if (!c.x.empty()) j["x"] = c.x;
        if (!c.y.empty()) j["y"] = c.y;
        j["mode"] = c.mode;
        j["S"] = c.S;
        j["rank"] = c.rank ? json(*c.rank) : json(nullptr);
        j["radius"] = c.radius;
        j["radius_cap"] = c.radius_cap;
    }
    return j;
}

const GF& field_of(std::uint32_t q) {
    if (q < 2) throw UsageError("--q must be a prime power >= 2");
    std::uint32_t p = 2;
    while (q % p) ++p;
    std::uint32_t n = 0, r = q;
    while (r % p == 0) {
        r /= p;
        ++n;
    }
    if (r != 1) throw UsageError("--q " + std::to_string(q) + " is not a prime power");
    return GF::make(p, n);
}

std::string place_label(const PlaceOfExt& v) {
    return v.below.to_string() + (v.L && v.L->degree() > 1 ? "#" + std::to_string(v.branch) : "");
}

// ---- Drinfeld ----

struct DrinfeldJob {
    ExtFieldPtr L;
    std::optional<DrinfeldModule> phi;
};

DrinfeldJob drinfeld_job(const GF& F, const JobConfig& c) {
    auto a = parse_var_poly(F, c.phi, "tau");
    if (a.empty() || a[0] != RatFunc::T(F)) throw UsageError("--phi must have constant term T");
    if (a.size() < 2) throw UsageError("--phi must have rank >= 1");
    a.erase(a.begin());
    DrinfeldJob job;
    if (c.minpolys.size() > 1 && c.command != "drinfeld-sweep") throw UsageError("--minpoly given more than once");
    DrinfeldModule base(F, a);
    job.L = c.minpolys.empty() || c.command == "drinfeld-sweep" ? base.ext_ptr()
                                                                : ExtField::make(F, parse_var_poly(F, c.minpolys[0], "x"));
    job.phi = job.L->degree() > 1 ? base.over(job.L) : base;
    return job;
}

ExtElem parse_alpha(const DrinfeldJob& job, const JobConfig& c) {
    if (c.alpha.empty()) throw UsageError("--alpha is required");
    const GF& F = job.L->field();
    if (job.L->degree() == 1) return ExtElem(*job.L, parse_ratfunc(F, c.alpha));
    return ExtElem(*job.L, parse_var_poly(F, c.alpha, "x"));
}

int drinfeld_height(const GF& F, const JobConfig& c, json& out) {
    auto job = drinfeld_job(F, c);
    ExtElem alpha = parse_alpha(job, c);
    HeightOptions opt;
    opt.cap = c.cap;
    opt.parallel = c.parallel;
    HeightResult h = global_height(*job.phi, alpha, opt);
    out["alpha"] = alpha.to_string();
    out["d"] = job.L->degree();
    out["hhat"] = frac(h.value);
    out["d_times_hhat"] = frac(job.L->degree() * h.value);
    out["status"] = to_string(h.status);
    json places = json::array();
    for (const auto& lh : h.per_place) {
        places.push_back({{"place", place_label(lh.place)},
                          {"degree", lh.place.d_v},
                          {"value", frac(lh.value)},
                          {"status", to_string(lh.status)},
                          {"iterations", lh.iterations}});
    }
    out["places"] = places;
    return h.status == HeightStatus::CapExceeded ? kInconclusive : kOk;
}

int drinfeld_sweep(const GF& F, const JobConfig& c, json& out, std::string& csv) {
    auto job = drinfeld_job(F, c);
    SweepFamily fam;
    fam.max_degree = c.max_degree;
    fam.include_constants = c.constants;
    for (const auto& m : c.minpolys) fam.minpolys.push_back(parse_var_poly(F, m, "x"));
    auto rows = lehmer_sweep(*job.phi, fam, c.cap, c.torsion_bound);
    csv = sweep_csv(rows);
    long pole = 0, unresolved = 0;
    std::optional<BigRational> pole_min;
    json violations = json::array();
    for (const auto& r : rows) {
        if (r.status != "Exact" && r.status != "CertifiedZero") ++unresolved;
        if (r.pole_case && r.status == "Exact" && r.torsion == "false") {
            ++pole;
            if (!pole_min || r.d_times_hhat < *pole_min) pole_min = r.d_times_hhat;
        }
        if (r.violation == "true")
            violations.push_back({{"alpha", r.alpha}, {"minpoly", r.minpoly}, {"d_times_hhat", frac(r.d_times_hhat)}, {"pole_case", r.pole_case}});
    }
    out["rows"] = rows.size();
    out["pole_case_rows"] = pole;
    out["pole_case_min_d_hhat"] = pole_min ? json(frac(*pole_min)) : json(nullptr);
    out["violations"] = violations;
    out["unresolved"] = unresolved;
    out["status"] = unresolved ? "Inconclusive" : "Complete";
    return unresolved ? kInconclusive : kOk;
}

int drinfeld_torsion(const GF& F, const JobConfig& c, json& out) {
    auto job = drinfeld_job(F, c);
    ExtElem alpha = parse_alpha(job, c);
    out["alpha"] = alpha.to_string();
    try {
        TorsionResult t = is_torsion(*job.phi, alpha, c.torsion_bound, c.cap);
        out["status"] = t.status == TorsionStatus::Torsion ? "Torsion" : "NonTorsion";
        out["certificate"] = t.certificate();
        if (t.status == TorsionStatus::NonTorsion) out["hhat"] = frac(t.height);
        return kOk;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Inconclusive) throw;
        out["status"] = "Inconclusive";
        out["message"] = e.what();
        return kInconclusive;
    }
}

// ---- Elliptic curves ----

struct CurveJob {
    std::optional<ECurve> E;
    std::optional<ECPoint> known;  // the generator's point, when drawn at random
};

CurveJob curve_job(const GF& F, const JobConfig& c) {
    CurveJob job;
    if (!c.generate.empty()) {
        if (c.generate != "semistable" && c.generate != "general") throw UsageError("--generate must be semistable or general");
        Rng rng(c.seed);
        GeneratedCurve g = generate_curve(F, rng, c.generate == "semistable");
        job.E.emplace(g.E);
        job.known = g.P;
        return job;
    }
    if (c.B.empty() || c.C.empty()) throw UsageError("--B and --C are required (or --generate)");
    job.E.emplace(parse_ratfunc(F, c.B), parse_ratfunc(F, c.C));
    return job;
}

json point_json(const ECPoint& P) {
    if (P.inf) return "O";
    return {{"x", P.x.to_string("t")}, {"y", P.y.to_string("t")}};
}

json curve_json(const ECurve& E) {
    return {{"B", E.B().to_string("t")}, {"C", E.C().to_string("t")}, {"j", E.j().to_string("t")}};
}

json profile_json(const ECurve& E) {
    CurveProfile pr = curve_profile(E);
    json j = {{"d_EK", pr.d_EK}, {"f_EK", pr.f_EK}, {"deg_j", pr.deg_j}, {"deg_s", pr.deg_s},
              {"p_e", pr.p_e},   {"genus", pr.genus}, {"semistable", pr.semistable}};
    return j;
}

json local_json(const ECurve& E) {
    json arr = json::array();
    for (const auto& d : E.local_data()) {
        arr.push_back({{"place", d.place.to_string()},
                       {"degree", d.place.degree()},
                       {"v_delta", d.v_delta},
                       {"reduction", to_string(d.type)},
                       {"kodaira", kodaira_symbol(d.kodaira, d.n)},
                       {"cmax", frac(d.cmax)},
                       {"k", d.k}});
    }
    return arr;
}

json szpiro_json(const ECurve& E) {
    SzpiroRow s = szpiro_check(E);
    return {{"lhs", s.lhs},
            {"rhs", s.rhs},
            {"szpiro", to_string(s.szpiro)},
            {"semistable_identity", to_string(s.semistable_identity)},
            {"conductor_bound", to_string(s.conductor_bound)}};
}

BigRational parse_width(const JobConfig& c) {
    BigRational w = parse_rational(c.width);
    if (w <= 0) throw UsageError("--width must be positive");
    return w;
}

json interval_json(const HeightInterval& h) {
    json j = {{"lo", frac(h.lo)}, {"hi", frac(h.hi)}, {"iterations", h.iterations}};
    if (h.torsion_order) j["torsion_order"] = h.torsion_order;
    return j;
}

int ec_profile(const GF& F, const JobConfig& c, json& out) {
    auto job = curve_job(F, c);
    const ECurve& E = *job.E;
    out["curve"] = curve_json(E);
    json pr = profile_json(E);
    for (auto& [k, v] : pr.items()) out[k] = v;
    out["places"] = local_json(E);
    out["szpiro"] = szpiro_json(E);
    return kOk;
}

int ec_height(const GF& F, const JobConfig& c, json& out) {
    auto job = curve_job(F, c);
    const ECurve& E = *job.E;
    ECPoint P;
    if (!c.x.empty() || !c.y.empty()) {
        if (c.x.empty() || c.y.empty()) throw UsageError("--x and --y go together");
        P = ECPoint::affine(parse_ratfunc(F, c.x), parse_ratfunc(F, c.y));
    } else if (job.known) {
        P = *job.known;
    } else {
        throw UsageError("--x and --y are required");
    }
    if (!E.contains(P)) throw UsageError("point " + P.to_string() + " is not on the curve");
    out["curve"] = curve_json(E);
    out["point"] = point_json(P);
    try {
        HeightInterval h = canonical_height(E, P, parse_width(c), c.cap);
        out["interval"] = interval_json(h);
        out["status"] = h.torsion_order ? "Torsion" : "Certified";
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::WidthNotReached) throw;
        out["status"] = "WidthNotReached";
        out["message"] = e.what();
        return kInconclusive;
    }
    out["exact"] = P.inf ? "0/1" : frac(exact_height(E, P, false));
    return kOk;
}

bool census_mode(const ECurve& E, const JobConfig& c) {
    if (c.mode == "auto") return E.semistable();
    if (c.mode == "semistable") return true;
    if (c.mode == "general") return false;
    throw UsageError("--mode must be auto, semistable or general");
}

json census_json(const Census& cs) {
    json below = json::array(), border = json::array();
    for (const auto& e : cs.below) below.push_back({{"point", point_json(e.P)}, {"height", interval_json(e.h)}});
    for (const auto& e : cs.borderline) border.push_back({{"point", point_json(e.P)}, {"height", interval_json(e.h)}});
    bool decided = cs.count + static_cast<long>(cs.borderline.size()) <= 24 || cs.count > 24;
    return {{"threshold", frac(cs.threshold)},
            {"radius", cs.radius},
            {"searched", cs.searched},
            {"count", cs.count},
            {"below", below},
            {"borderline", border},
            {"verdict", decided ? (cs.within_24() ? "Pass" : "Fail") : "Inconclusive"}};
}

std::string census_csv(const Census& cs) {
    std::ostringstream s;
    s << "x,y,lo,hi,torsion_order,status\n";
    auto row = [&](const CensusEntry& e, const char* st) {
        s << (e.P.inf ? "O" : e.P.x.to_string("t")) << ',' << (e.P.inf ? "" : e.P.y.to_string("t")) << ',' << frac(e.h.lo)
          << ',' << frac(e.h.hi) << ',' << e.h.torsion_order << ',' << st << '\n';
    };
    for (const auto& e : cs.below) row(e, "below");
    for (const auto& e : cs.borderline) row(e, "borderline");
    return s.str();
}

json torsion_json(const ECurve& E) {
    json arr = json::array();
    for (const auto& t : torsion_group(E)) arr.push_back({{"point", point_json(t.P)}, {"order", t.order}});
    return arr;
}

int ec_census(const GF& F, const JobConfig& c, json& out, std::string& csv) {
    auto job = curve_job(F, c);
    const ECurve& E = *job.E;
    bool semi = census_mode(E, c);
    Census cs = small_height_census(E, semi, parse_width(c));
    out["curve"] = curve_json(E);
    out["profile"] = profile_json(E);
    out["mode"] = semi ? "semistable" : "general";
    out["census"] = census_json(cs);
    out["torsion"] = torsion_json(E);
    csv = census_csv(cs);
    return out["census"]["verdict"] == "Inconclusive" ? kInconclusive : kOk;
}

std::vector<Place> parse_places(const GF& F, const std::vector<std::string>& S) {
    std::vector<Place> out;
    for (const auto& s : S) {
        if (s == "inf") {
            out.push_back(Place::infinite(F));
            continue;
        }
        Poly pi = parse_poly(F, s);
        Rng rng(0);
        auto fs = factor(pi, rng);
        if (pi.degree() < 1 || fs.size() != 1 || fs[0].mult != 1) throw UsageError("--S entry '" + s + "' is not irreducible");
        out.push_back(Place::finite(pi.monic()));
    }
    return out;
}

json integral_json(const IntegralReport& r) {
    json pts = json::array();
    for (const auto& P : r.points) pts.push_back(point_json(P));
    json j = {{"model", curve_json(r.model.E)},
              {"u", r.model.u.to_string("t")},
              {"points", pts},
              {"complete", r.complete},
              {"radius_needed", r.radius_needed},
              {"radius_searched", r.radius_searched},
              {"delta", frac(r.delta)},
              {"epsilon_observed", frac(r.epsilon_observed)},
              {"epsilon_bound", frac(r.epsilon_bound)},
              {"epsilon_verdict", to_string(r.epsilon_verdict)},
              {"bound_semistable", r.bound_semistable},
              {"verdict_semistable", to_string(r.verdict_semistable)},
              {"bound_general", r.bound_general},
              {"verdict_general", to_string(r.verdict_general)}};
    if (r.rank) j["rank"] = {{"value", r.rank->rank}, {"lower_bound", r.rank->lower_bound}};
    return j;
}

bool integral_unresolved(const IntegralReport& r) {
    return !r.complete || r.epsilon_verdict == Verdict::Inconclusive || r.verdict_semistable == Verdict::Inconclusive ||
           r.verdict_general == Verdict::Inconclusive;
}

int ec_integral(const GF& F, const JobConfig& c, json& out) {
    auto job = curve_job(F, c);
    if (c.S.empty()) throw UsageError("--S is required");
    std::optional<RankInfo> rank;
    if (c.rank) rank = RankInfo{*c.rank, false};
    IntegralReport r = integral_points_census(*job.E, parse_places(F, c.S), rank, c.radius_cap);
    out["curve"] = curve_json(*job.E);
    out["integral"] = integral_json(r);
    return integral_unresolved(r) ? kInconclusive : kOk;
}

int ec_report(const GF& F, const JobConfig& c, json& out, std::string& csv) {
    auto job = curve_job(F, c);
    const ECurve& E = *job.E;
    bool semi = census_mode(E, c);
    Census cs = small_height_census(E, semi, parse_width(c));
    out["curve"] = curve_json(E);
    out["profile"] = profile_json(E);
    out["places"] = local_json(E);
    out["szpiro"] = szpiro_json(E);
    out["mode"] = semi ? "semistable" : "general";
    out["census"] = census_json(cs);
    out["torsion"] = torsion_json(E);
    csv = census_csv(cs);
    bool unresolved = out["census"]["verdict"] == "Inconclusive";

    long radius = c.radius >= 0 ? c.radius : cs.radius;
    std::vector<ECPoint> pts = point_search(E, radius, c.parallel);
    if (job.known) pts.push_back(*job.known);
    json lang = json::array();
    long inconclusive = 0;
    for (const auto& row : lehmer_lang_check(E, pts, c.cap)) {
        if (row.verdict == Verdict::Inconclusive) ++inconclusive;
        lang.push_back({{"point", point_json(row.P)}, {"height", interval_json(row.h)}, {"bound", frac(row.bound)}, {"verdict", to_string(row.verdict)}});
    }
    out["lang"] = {{"radius", radius}, {"rows", lang}, {"inconclusive", inconclusive}};
    unresolved = unresolved || inconclusive > 0;

    if (!c.S.empty()) {
        std::optional<RankInfo> rank;
        if (c.rank) rank = RankInfo{*c.rank, false};
        IntegralReport r = integral_points_census(E, parse_places(F, c.S), rank, c.radius_cap);
        out["integral"] = integral_json(r);
        unresolved = unresolved || integral_unresolved(r);
    }
    return unresolved ? kInconclusive : kOk;
}

// Input-side failures exit 1; anything that ran but could not be resolved exits 2.
bool is_input_error(ErrorKind k) {
    switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotPrime:
    case ErrorKind::NotIrreducible:
    case ErrorKind::NotOnCurve:
    case ErrorKind::IsotrivialCurve:
    case ErrorKind::UnsupportedCharacteristic:
    case ErrorKind::FieldTooLarge:
    case ErrorKind::DivisionByZero:
        return true;
    default:
        return false;
    }
}

void write_atomic(const std::string& path, const std::string& text) {
    std::filesystem::path p(path), tmp = p;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write " + tmp.string());
        f << text;
        if (!f.flush()) throw UsageError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    JobConfig c;
    CLI::App app{"Exact canonical heights for Drinfeld modules and elliptic curves over F_q(T)", "fheight"};
    app.set_config("--config", "", "read flags from a key = value file");
    app.add_option("command", c.command, "subcommand")->required()->check(CLI::IsMember(kCommands));
    app.add_option("--q", c.q, "size of the constant field (prime power)")->required();
    app.add_option("--phi", c.phi, "Drinfeld module, e.g. \"T + T^2*tau + tau^2\"");
    app.add_option("--alpha", c.alpha, "point: element of K, or a polynomial in x when --minpoly is given");
    app.add_option("--minpoly", c.minpolys, "defining polynomial of L = K[x]/(f); repeatable for drinfeld-sweep");
    app.add_option("--max-degree", c.max_degree, "sweep: num/den degree bound");
    app.add_flag("!--no-constants", c.constants, "sweep: skip alpha in F_q");
    app.add_option("--torsion-bound", c.torsion_bound, "degree bound for torsion certificates");
    app.add_option("--B", c.B, "curve coefficient B in y^2 = x^3 + Bx + C");
    app.add_option("--C", c.C, "curve coefficient C");
    app.add_option("--generate", c.generate, "draw a curve from --seed: semistable | general");
    app.add_option("--x", c.x, "point x-coordinate");
    app.add_option("--y", c.y, "point y-coordinate");
    app.add_option("--mode", c.mode, "census threshold: auto | semistable | general");
    app.add_option("--S", c.S, "places of S: inf or a monic irreducible polynomial; repeatable")->delimiter(',');
    app.add_option("--rank", c.rank, "exact Mordell-Weil rank, when known");
    app.add_option("--radius", c.radius, "ec-report: search radius for the Lang check");
    app.add_option("--radius-cap", c.radius_cap, "ec-integral: largest searched radius");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--cap", c.cap, "iteration cap");
    app.add_option("--width", c.width, "target height-interval width, as a rational");
    app.add_option("--out", c.out, "JSON output path (default: stdout)");
    app.add_option("--csv", c.csv, "CSV output path");
    app.add_flag("--parallel", c.parallel, "evaluate independent places/denominators concurrently");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInputError;
    }

    json rec;
    std::string csv;
    int code = kOk;
    try {
        if (!c.csv.empty() && c.command != "drinfeld-sweep" && c.command != "ec-census" && c.command != "ec-report")
            throw UsageError("--csv is not produced by " + c.command);
        const GF& F = field_of(c.q);
        rec["command"] = c.command;
        rec["config"] = config_json(c);
        if (c.command == "drinfeld-height") code = drinfeld_height(F, c, rec);
        else if (c.command == "drinfeld-sweep") code = drinfeld_sweep(F, c, rec, csv);
        else if (c.command == "drinfeld-torsion") code = drinfeld_torsion(F, c, rec);
        else if (c.command == "ec-profile") code = ec_profile(F, c, rec);
        else if (c.command == "ec-height") code = ec_height(F, c, rec);
        else if (c.command == "ec-census") code = ec_census(F, c, rec, csv);
        else if (c.command == "ec-integral") code = ec_integral(F, c, rec);
        else code = ec_report(F, c, rec, csv);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInputError;
    } catch (const Error& e) {
        if (is_input_error(e.kind())) {
            err << "error: " << e.what() << "\n";
            return kInputError;
        }
        rec["status"] = to_string(e.kind());
        rec["message"] = e.what();
        code = kInconclusive;
    }

    try {
        std::string text = rec.dump(2) + "\n";
        if (c.out.empty()) out << text;
        else write_atomic(c.out, text);
        if (!c.csv.empty()) write_atomic(c.csv, csv);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return code;
}

}  // namespace fheight::cli
