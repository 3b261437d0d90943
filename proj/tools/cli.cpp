#include "cli.hpp"

#include "skewlab/circle_flows.hpp"
#include "skewlab/error.hpp"
#include "skewlab/exponents.hpp"
#include "skewlab/grigorchuk.hpp"
#include "skewlab/sampling.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace skewlab::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kPartialSumStream = 0x7061727469616cULL;  // "partial"
constexpr std::uint64_t kFlowStream = 0x666c6f7773ULL;  // "flows"

struct HelpRequested {
    std::string text;
};

std::string num(double x)
{
    return fmt::format("{:.17g}", x);
}

ordered_json vec_json(const Vector4& v)
{
    return ordered_json::array({v.w, v.x, v.y, v.z});
}

ordered_json quat_json(const UnitQuaternion& q)
{
    return vec_json(q.vec());
}

// Named pass/fail assertions collected by a subcommand.
class Checks {
public:
    void add(std::string name, bool passed, double value, double threshold, std::string relation)
    {
        items_.push_back({std::move(name), passed, value, threshold, std::move(relation)});
    }

    bool all_passed() const
    {
        return std::all_of(items_.begin(), items_.end(), [](const Item& c) { return c.passed; });
    }

    std::string first_failure() const
    {
        for (const Item& c : items_)
            if (!c.passed)
                return fmt::format("{}: {} {} {} does not hold", c.name, num(c.value), c.relation, num(c.threshold));
        return {};
    }

    ordered_json to_json() const
    {
        ordered_json out = ordered_json::array();
        for (const Item& c : items_)
            out.push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"relation", c.relation},
                           {"threshold", c.threshold}});
        return out;
    }

private:
    struct Item {
        std::string name;
        bool passed;
        double value;
        double threshold;
        std::string relation;
    };
    std::vector<Item> items_;
};

class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    void write(const std::string& name, const std::string& content)
    {
        std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!f)
            throw ConfigError("cannot write " + (dir_ / name).string());
        f << content;
        names_.push_back(name);
    }

    void write_json(const std::string& name, const ordered_json& j) { write(name, j.dump(2) + "\n"); }

    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> names_;
};

ordered_json config_echo(const RunConfig& c)
{
    const BuilderConfig& b = c.builder;
    return {{"seed", b.seed},
            {"v0", vec_json(b.v0)},
            {"delta", b.delta},
            {"epsilon", b.epsilon},
            {"theta_h", b.theta_h},
            {"eta", b.eta},
            {"candidate_samples", b.candidate_samples},
            {"test_net_size", b.test_net_size},
            {"cover_margin", b.cover_margin},
            {"max_enlarge_rounds", b.max_enlarge_rounds},
            {"relation_check_length", b.relation_check_length},
            {"relation_tolerance", b.relation_tolerance},
            {"max_reseeds", b.max_reseeds},
            {"n_growth", c.n_growth},
            {"n_periodic", c.n_periodic},
            {"word_sample_size", c.word_sample_size},
            {"grid_base_points", c.grid.base_points},
            {"grid_fiber_points", c.grid.fiber_points},
            {"slope_tolerance", c.slope_tolerance},
            {"identity_tolerance", c.identity_tolerance},
            {"ball_radius", c.ball_radius},
            {"burnside_n", c.burnside_n},
            {"partial_sum_trials", c.partial_sum_trials},
            {"partial_sum_n", c.partial_sum_n}};
}

template <typename T>
T json_get(const nlohmann::json& j, const char* key)
{
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
    }
}

void apply_config_file(RunConfig& c, const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot read config file " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config file must hold a JSON object");
    BuilderConfig& b = c.builder;
    for (const auto& [key, value] : j.items()) {
        const char* k = key.c_str();
        if (key == "seed") {
            b.seed = json_get<std::uint64_t>(j, k);
            c.seed_given = true;
        } else if (key == "v0") {
            const auto v = json_get<std::vector<double>>(j, k);
            if (v.size() != 4)
                throw ConfigError("config key 'v0' needs four components");
            b.v0 = {v[0], v[1], v[2], v[3]};
        } else if (key == "delta") {
            b.delta = json_get<double>(j, k);
        } else if (key == "epsilon") {
            b.epsilon = json_get<double>(j, k);
        } else if (key == "theta_h") {
            b.theta_h = json_get<double>(j, k);
        } else if (key == "eta") {
            b.eta = json_get<double>(j, k);
        } else if (key == "candidate_samples") {
            b.candidate_samples = json_get<std::size_t>(j, k);
        } else if (key == "test_net_size") {
            b.test_net_size = json_get<std::size_t>(j, k);
        } else if (key == "cover_margin") {
            b.cover_margin = json_get<double>(j, k);
        } else if (key == "max_enlarge_rounds") {
            b.max_enlarge_rounds = json_get<std::size_t>(j, k);
        } else if (key == "relation_check_length") {
            b.relation_check_length = json_get<std::size_t>(j, k);
        } else if (key == "relation_tolerance") {
            b.relation_tolerance = json_get<double>(j, k);
        } else if (key == "max_reseeds") {
            b.max_reseeds = json_get<std::size_t>(j, k);
        } else if (key == "n_growth") {
            c.n_growth = json_get<std::size_t>(j, k);
        } else if (key == "n_periodic") {
            c.n_periodic = json_get<std::size_t>(j, k);
        } else if (key == "word_sample_size") {
            c.word_sample_size = json_get<std::size_t>(j, k);
        } else if (key == "grid_base_points") {
            c.grid.base_points = json_get<std::size_t>(j, k);
        } else if (key == "grid_fiber_points") {
            c.grid.fiber_points = json_get<std::size_t>(j, k);
        } else if (key == "slope_tolerance") {
            c.slope_tolerance = json_get<double>(j, k);
        } else if (key == "identity_tolerance") {
            c.identity_tolerance = json_get<double>(j, k);
        } else if (key == "ball_radius") {
            c.ball_radius = json_get<std::size_t>(j, k);
        } else if (key == "burnside_n") {
            c.burnside_n = json_get<std::size_t>(j, k);
        } else if (key == "partial_sum_trials") {
            c.partial_sum_trials = json_get<std::size_t>(j, k);
        } else if (key == "partial_sum_n") {
            c.partial_sum_n = json_get<std::size_t>(j, k);
        } else if (key == "out") {
            c.out = json_get<std::string>(j, k);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

RunConfig parse(int argc, const char* const* argv)
{
    CLI::App app{"skewlab: skew-product derivative growth experiments"};
    app.set_version_flag("--version", kVersion);
    std::string subcommand;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t n_growth = 0;
    std::size_t n_periodic = 0;
    std::size_t word_sample = 0;
    std::size_t ball_radius = 0;
    std::size_t grid = 0;
    double delta = 0.0;

    app.add_option("subcommand", subcommand, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(subcommands()));
    auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override it");
    auto* o_seed = app.add_option("--seed", seed, "Seed for every random stream (required)");
    auto* o_out = app.add_option("--out", out, "Output directory");
    auto* o_growth = app.add_option("--n-growth", n_growth, "Length N of the recurrent ray");
    auto* o_periodic = app.add_option("--n-periodic", n_periodic, "Largest power N for periodic orbits");
    auto* o_words = app.add_option("--word-sample", word_sample, "Random positive words in the periodic sweep");
    auto* o_delta = app.add_option("--delta", delta, "Recurrence radius delta");
    auto* o_ball = app.add_option("--ball-radius", ball_radius, "Radius of the Grigorchuk ball table");
    auto* o_grid = app.add_option("--grid", grid, "Base and fiber points of the periodic sample grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested{std::string(kVersion) + "\n"};
    } catch (const CLI::Success&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig c;
    c.subcommand = subcommand;
    if (o_config->count() > 0) {
        c.config_path = config_path;
        apply_config_file(c, config_path);
    }
    if (o_seed->count() > 0) {
        c.builder.seed = seed;
        c.seed_given = true;
    }
    if (o_out->count() > 0)
        c.out = out;
    if (o_growth->count() > 0)
        c.n_growth = n_growth;
    if (o_periodic->count() > 0)
        c.n_periodic = n_periodic;
    if (o_words->count() > 0)
        c.word_sample_size = word_sample;
    if (o_delta->count() > 0)
        c.builder.delta = delta;
    if (o_ball->count() > 0)
        c.ball_radius = ball_radius;
    if (o_grid->count() > 0)
        c.grid = {grid, grid};
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------

struct Context {
    const RunConfig& config;
    Artifacts& artifacts;
    Checks& checks;
    ordered_json& summary;
    std::ostream& log;
};

void run_partial_sums(Context& ctx)
{
    const RunConfig& c = ctx.config;
    Rng rng = Rng::stream(c.builder.seed, kPartialSumStream);
    std::string csv = "trial,eigen_angle,bound,max_norm,max_closed_form_error\n";
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_error = 0.0;
    for (std::size_t t = 0; t < c.partial_sum_trials; ++t) {
        const UnitQuaternion q = UnitQuaternion::from_axis_angle(rng.unit_axis(), rng.uniform(0.05, std::numbers::pi));
        const Vector4 v = rng.unit_vector4();
        const double bound = partial_sum_bound(q);
        Vector4 sum;
        Vector4 term = v;
        double max_norm = 0.0;
        double max_error = 0.0;
        for (std::size_t n = 1; n <= c.partial_sum_n; ++n) {
            sum += term;
            term = act(q, term);
            max_norm = std::max(max_norm, norm(sum));
            max_error = std::max(max_error, distance(sum, partial_sum_closed_form(q, v, n)));
        }
        worst_excess = std::max(worst_excess, max_norm - bound);
        worst_error = std::max(worst_error, max_error);
        csv += fmt::format("{},{},{},{},{}\n", t, num(eigen_angle(q)), num(bound), num(max_norm), num(max_error));
    }
    ctx.artifacts.write("partial_sums.csv", csv);
    ctx.checks.add("partial_sum_bound", worst_excess <= 1e-8, worst_excess, 1e-8, "<=");
    ctx.checks.add("closed_form_agreement", worst_error <= 1e-9, worst_error, 1e-9, "<=");
    ctx.summary["trials"] = c.partial_sum_trials;
    ctx.summary["max_n"] = c.partial_sum_n;
}

void run_flows(Context& ctx)
{
    const FlowSystem flows = FlowSystem::standard();
    Rng rng = Rng::stream(ctx.config.builder.seed, kFlowStream);
    std::string csv = "check,index,t,u,s,error\n";

    double closed_error = 0.0;
    double ode_error = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const CirclePoint p(flows.spec(i).fixed_point);
        const double closed = flows.flow_derivative(i, 1.0, p);
        const double ode = std::exp2(flows.integrate(i, 1.0, p).log2_derivative);
        closed_error = std::max(closed_error, std::abs(closed - 2.0));
        ode_error = std::max(ode_error, std::abs(ode - 2.0));
        csv += fmt::format("calibration_closed_form,{},1,0,{},{}\n", i, num(p.value()), num(std::abs(closed - 2.0)));
        csv += fmt::format("calibration_ode,{},1,0,{},{}\n", i, num(p.value()), num(std::abs(ode - 2.0)));
    }

    double group_error = 0.0;
    for (int k = 0; k < 60; ++k) {
        const int i = 1 + static_cast<int>(rng.below(4));
        const FlowSpec& f = flows.spec(i);
        const CirclePoint s(rng.uniform(f.arc_begin, f.arc_end));
        const double t = rng.uniform(-10.0, 10.0);
        const double u = rng.uniform(-10.0, 10.0);
        const double e = circle_distance(flows.flow(i, t, flows.flow(i, u, s)), flows.flow(i, t + u, s));
        group_error = std::max(group_error, e);
        csv += fmt::format("group_law,{},{},{},{},{}\n", i, num(t), num(u), num(s.value()), num(e));
    }

    double commute_error = 0.0;
    for (int k = 0; k < 200; ++k) {
        const int i = 1 + static_cast<int>(rng.below(4));
        const int j = 1 + (i + static_cast<int>(rng.below(3))) % 4;
        const CirclePoint s(rng.uniform());
        const double t = rng.uniform(-5.0, 5.0);
        const double u = rng.uniform(-5.0, 5.0);
        const double e = circle_distance(flows.flow(i, t, flows.flow(j, u, s)), flows.flow(j, u, flows.flow(i, t, s)));
        commute_error = std::max(commute_error, e);
        csv += fmt::format("commutation,{}{},{},{},{},{}\n", i, j, num(t), num(u), num(s.value()), num(e));
    }
    ctx.artifacts.write("flows.csv", csv);
    ctx.checks.add("calibration_closed_form", closed_error == 0.0, closed_error, 0.0, "==");
    ctx.checks.add("calibration_ode", ode_error <= 1e-6, ode_error, 1e-6, "<=");
    ctx.checks.add("group_law", group_error <= 1e-8, group_error, 1e-8, "<=");
    ctx.checks.add("commutation", commute_error <= 1e-12, commute_error, 1e-12, "<=");
    ctx.summary["max_field_derivative"] = flows.max_field_derivative();
    ctx.summary["max_field_derivative_over_ln2"] = flows.max_field_derivative() / std::numbers::ln2;
}

BuildResult run_build(Context& ctx, std::size_t length)
{
    const RunConfig& c = ctx.config;
    ctx.log << "building generator set (seed " << c.builder.seed << ")\n";
    BuildResult build = build_sequence(c.builder);
    build.sequence.extend_to(length);
    const RecurrentSequence& seq = build.sequence;
    const UnitQuaternion& h = seq.generators().back();

    ordered_json gens = ordered_json::array();
    for (const UnitQuaternion& g : seq.generators())
        gens.push_back(quat_json(g));
    ctx.artifacts.write_json("generators.json",
                             {{"v0", vec_json(seq.v0())},
                              {"delta", seq.delta()},
                              {"generator_count", seq.generators().size()},
                              {"drift_index", seq.drift_index() + 1},
                              {"net_size", build.cover.net_size},
                              {"cover_size", build.cover.elements.size()},
                              {"enlarge_rounds", build.cover.enlarge_rounds},
                              {"worst_test_distance", build.cover.worst_test_distance},
                              {"reseeds", build.reseeds},
                              {"drift_exit_steps", drift_exit_steps(h, c.builder)},
                              {"relation_check_length", c.builder.relation_check_length},
                              {"relation_tolerance", c.builder.relation_tolerance},
                              {"generators", gens}});

    std::string csv = "n,letter,is_drift,distance_to_v0,sum_w,sum_x,sum_y,sum_z\n";
    double worst_distance = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    const double per_letter = seq.v0().w - seq.delta();
    for (std::size_t n = 1; n <= seq.size(); ++n) {
        const std::size_t letter = seq.indices()[n - 1];
        const double d = distance(seq.positions()[n], seq.v0());
        const Vector4& s = seq.running_sums()[n];
        worst_distance = std::max(worst_distance, d);
        worst_margin = std::min(worst_margin, s.w - static_cast<double>(n) * per_letter);
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", n, letter + 1, letter == seq.drift_index() ? 1 : 0,
                           num(d), num(s.w), num(s.x), num(s.y), num(s.z));
    }
    ctx.artifacts.write("sequence.csv", csv);
    ctx.checks.add("recurrence_within_delta", worst_distance <= seq.delta(), worst_distance, seq.delta(), "<=");
    ctx.checks.add("running_sum_linear_growth", worst_margin >= 0.0, worst_margin, 0.0, ">=");
    ctx.summary["generator_count"] = seq.generators().size();
    ctx.summary["sequence_length"] = seq.size();
    ctx.summary["reseeds"] = build.reseeds;
    return build;
}

void write_growth(Context& ctx, const ExponentReport& r, double required_rate)
{
    std::string csv = "n,log2_fiber_derivative,translation_norm,bound\n";
    for (std::size_t n = 1; n <= r.log2_values.size(); ++n)
        csv += fmt::format("{},{},{},{}\n", n, num(r.log2_values[n - 1]), num(r.translation_norms[n - 1]),
                           num(static_cast<double>(n) * r.bound));
    ctx.artifacts.write("growth.csv", csv);
    ctx.checks.add("growth_rate", r.rate >= required_rate - 1e-9, r.rate, required_rate - 1e-9, ">=");
    ctx.summary["growth"] = {{"n", r.log2_values.size()},
                             {"certified_rate", r.rate},
                             {"required_rate", required_rate},
                             {"fitted_log2_slope", r.slope},
                             {"final_log2_derivative", r.log2_values.back()},
                             {"verdict", to_string(r.verdict)}};
}

void write_periodic(Context& ctx, const std::vector<BaseWord>& words, const std::vector<ExponentReport>& reports)
{
    ordered_json list = ordered_json::array();
    bool all_elliptic = true;
    double worst_slope = 0.0;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const ExponentReport& r = reports[k];
        std::string csv = "n,log2_fiber_derivative,translation_norm,bound\n";
        for (std::size_t n = 1; n <= r.log2_values.size(); ++n)
            csv += fmt::format("{},{},{},{}\n", n, num(r.log2_values[n - 1]), num(r.translation_norms[n - 1]),
                               num(r.bound));
        const std::string file = "elliptic_" + word_label(words[k]) + ".csv";
        ctx.artifacts.write(file, csv);
        all_elliptic = all_elliptic && r.verdict == Verdict::elliptic;
        worst_slope = std::max(worst_slope, std::abs(r.slope));
        list.push_back({{"word", words[k].to_signed()},
                        {"file", file},
                        {"translation_bound", r.bound},
                        {"log2_derivative_bound", r.log2_bound},
                        {"max_translation_norm", *std::max_element(r.translation_norms.begin(), r.translation_norms.end())},
                        {"max_log2_derivative", *std::max_element(r.log2_values.begin(), r.log2_values.end())},
                        {"fitted_log2_slope", r.slope},
                        {"rate", r.rate},
                        {"bound_violated", r.bound_violated},
                        {"verdict", to_string(r.verdict)}});
    }
    ctx.checks.add("all_periodic_elliptic", all_elliptic, worst_slope, ctx.config.slope_tolerance, "|slope| <=");
    ctx.summary["periodic"] = list;
    ctx.summary["periodic_vacuous"] = words.empty();
}

PeriodicOptions periodic_options(const RunConfig& c)
{
    PeriodicOptions o;
    o.grid = c.grid;
    o.slope_tolerance = c.slope_tolerance;
    o.identity_tolerance = c.identity_tolerance;
    return o;
}

void run_growth(Context& ctx)
{
    const BuildResult build = run_build(ctx, ctx.config.n_growth);
    const ExponentReport r = growth_exponent(build.sequence, ctx.config.n_growth, FlowSystem::standard());
    write_growth(ctx, r, std::numbers::ln2 * r.bound);
}

void run_elliptic(Context& ctx)
{
    const RunConfig& c = ctx.config;
    const BuildResult build = run_build(ctx, 0);
    const auto group = make_skew_group(build.sequence, FlowSystem::standard());
    const auto words = periodic_word_sample(group->size(), c.word_sample_size, c.builder.seed);
    std::vector<ExponentReport> reports;
    for (const BaseWord& w : words) {
        ctx.log << "periodic orbit " << w.to_string() << "\n";
        reports.push_back(periodic_exponent(SkewWord(group, w), c.n_periodic, periodic_options(c)));
    }
    write_periodic(ctx, words, reports);
}

void run_dichotomy(Context& ctx)
{
    const RunConfig& c = ctx.config;
    const BuildResult build = run_build(ctx, c.n_growth);
    DichotomyOptions o;
    o.n_periodic = c.n_periodic;
    o.n_growth = c.n_growth;
    o.word_sample_size = c.word_sample_size;
    o.periodic = periodic_options(c);
    ctx.log << "running the periodic sweep and the growth ray\n";
    const DichotomySummary s = dichotomy_report(build, FlowSystem::standard(), o, c.builder.seed);
    write_periodic(ctx, s.words, s.periodic);
    write_growth(ctx, s.growth, s.required_rate);
    ctx.checks.add("dichotomy_holds", s.holds, s.holds ? 1.0 : 0.0, 1.0, "==");
    ctx.summary["dichotomy_holds"] = s.holds;
}

void run_burnside(Context& ctx)
{
    const RunConfig& c = ctx.config;
    const BallTable table(c.ball_radius);

    std::string balls = "n,ball_size\n";
    bool strict = true;
    for (std::size_t n = 0; n < table.ball_sizes().size(); ++n) {
        balls += fmt::format("{},{}\n", n, table.ball_sizes()[n]);
        if (n > 0 && table.ball_sizes()[n] <= table.ball_sizes()[n - 1])
            strict = false;
    }
    ctx.artifacts.write("burnside_balls.csv", balls);
    ctx.checks.add("ball_sizes_strictly_increase", strict, static_cast<double>(table.size()), 0.0, ">");

    const bool relations = is_trivial(GrigorchukElement("aa")) && is_trivial(GrigorchukElement("bb"))
        && is_trivial(GrigorchukElement("cc")) && is_trivial(GrigorchukElement("dd"))
        && same_element(GrigorchukElement("bc"), GrigorchukElement("d"))
        && same_element(GrigorchukElement("cb"), GrigorchukElement("d"))
        && same_element(GrigorchukElement("bd"), GrigorchukElement("c"))
        && same_element(GrigorchukElement("cd"), GrigorchukElement("b"));
    ctx.checks.add("generator_relations", relations, relations ? 1.0 : 0.0, 1.0, "==");

    std::string orders = fmt::format("word,length,order,bound_n{},bound_n{},exact\n", c.burnside_n, 2 * c.burnside_n);
    double worst_bound = 0.0;
    double worst_ratio = 0.0;
    std::uint64_t max_order = 0;
    bool all_exact = true;
    const std::size_t short_radius = std::min<std::size_t>(4, table.radius());
    for (std::size_t k = 0; k < table.size() && table.lengths()[k] <= short_radius; ++k) {
        const GrigorchukElement& g = table.representatives()[k];
        const PeriodicBanachExponent e = periodic_banach_exponent(g, c.burnside_n, table);
        const PeriodicBanachExponent e2 = periodic_banach_exponent(g, 2 * c.burnside_n, table);
        worst_bound = std::max(worst_bound, e.bound);
        if (!g.empty())
            worst_ratio = std::max(worst_ratio, e2.bound / e.bound);
        max_order = std::max(max_order, e.order);
        all_exact = all_exact && e.exact && e2.exact;
        orders += fmt::format("{},{},{},{},{},{}\n", g.empty() ? "e" : g.word(), table.lengths()[k], e.order,
                              num(e.bound), num(e2.bound), e.exact && e2.exact ? 1 : 0);
    }
    ctx.artifacts.write("burnside_orders.csv", orders);
    ctx.checks.add("periodic_bound_decreases_when_n_doubles", worst_ratio < 1.0, worst_ratio, 1.0, "<");

    const GeodesicRay ray = geodesic_ray_exponent(table, table.radius());
    ctx.checks.add("geodesic_ray_exponent_ln2", ray.exponent == std::numbers::ln2, ray.exponent, std::numbers::ln2,
                   "==");
    ctx.summary["group"] = "first Grigorchuk group <a,b,c,d>: a swaps subtrees, b=(a,c), c=(a,d), d=(1,b)";
    ctx.summary["ball_radius"] = table.radius();
    ctx.summary["ball_size"] = table.size();
    ctx.summary["max_order_short_elements"] = max_order;
    ctx.summary["periodic_n"] = c.burnside_n;
    ctx.summary["max_periodic_bound"] = worst_bound;
    ctx.summary["periodic_lengths_exact"] = all_exact;
    ctx.summary["geodesic_witness"] = ray.witness.word();
    ctx.summary["ray_exponent"] = ray.exponent;
    ctx.summary["top_exponent"] = std::numbers::ln2;
}

} // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const
{
    if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    if (!seed_given)
        throw ConfigError("a seed is required (--seed or \"seed\" in the config file)");
    builder.validate();
    if (n_growth == 0)
        throw ConfigError("n_growth must be at least 1");
    if (n_periodic < 10)
        throw ConfigError("n_periodic must be at least 10");
    if (grid.base_points == 0 || grid.fiber_points == 0)
        throw ConfigError("the sample grid needs at least one point in each factor");
    if (!(slope_tolerance > 0.0) || !(identity_tolerance > 0.0) || !(builder.relation_tolerance > 0.0))
        throw ConfigError("tolerances must be positive");
    if (ball_radius == 0)
        throw ConfigError("ball_radius must be at least 1");
    if (burnside_n < 2)
        throw ConfigError("burnside_n must be at least 2");
    if (partial_sum_trials == 0 || partial_sum_n == 0)
        throw ConfigError("partial-sum trial counts must be positive");
}

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"partial-sums", "flows", "build", "growth",
                                                "elliptic", "dichotomy", "burnside"};
    return names;
}

std::string word_label(const BaseWord& word)
{
    std::string out;
    for (int s : word.to_signed()) {
        if (!out.empty())
            out += '_';
        out += s < 0 ? "m" + std::to_string(-s) : std::to_string(s);
    }
    return out.empty() ? "empty" : out;
}

RunConfig parse_arguments(int argc, const char* const* argv)
{
    try {
        return parse(argc, argv);
    } catch (const HelpRequested&) {
        throw ConfigError("help requested");
    }
}

int execute(const RunConfig& config, std::ostream& log)
{
    const auto start = std::chrono::steady_clock::now();
    Artifacts artifacts(config.out);
    Checks checks;
    ordered_json summary = {{"subcommand", config.subcommand}, {"seed", config.builder.seed}};
    Context ctx{config, artifacts, checks, summary, log};

    std::string breach;
    try {
        if (config.subcommand == "partial-sums")
            run_partial_sums(ctx);
        else if (config.subcommand == "flows")
            run_flows(ctx);
        else if (config.subcommand == "build")
            run_build(ctx, config.n_growth);
        else if (config.subcommand == "growth")
            run_growth(ctx);
        else if (config.subcommand == "elliptic")
            run_elliptic(ctx);
        else if (config.subcommand == "dichotomy")
            run_dichotomy(ctx);
        else if (config.subcommand == "burnside")
            run_burnside(ctx);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        breach = e.what();
    }
    if (breach.empty() && !checks.all_passed())
        breach = checks.first_failure();

    summary["checks"] = checks.to_json();
    summary["passed"] = breach.empty();
    if (!breach.empty())
        summary["first_failure"] = breach;
    artifacts.write_json("summary.json", summary);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<std::string> names = artifacts.names();
    names.push_back("manifest.json");
    ordered_json manifest = {
        {"tool", "skewlab"},
        {"version", kVersion},
        {"subcommand", config.subcommand},
        {"seed", config.builder.seed},
        {"config_file", config.config_path},
        {"config", config_echo(config)},
        {"versions",
         {{"skewlab", kVersion},
          {"compiler", __VERSION__},
          {"cplusplus", __cplusplus},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION}}},
        {"rng",
         "std::mt19937_64 seeded with splitmix64(seed ^ stream_tag); uniform = (x >> 11) * 2^-53; "
         "normals by Box-Muller; Halton bases 2,3,5 on S^3 via Shoemake, base 7 on S^1"},
        {"units", "derivatives reported as log2"},
        {"burnside_group", "first Grigorchuk group"},
        {"artifacts", names},
        {"wall_time_seconds", wall}};
    artifacts.write_json("manifest.json", manifest);

    if (!breach.empty()) {
        log << "invariant breach: " << breach << "\n";
        return kExitInvariant;
    }
    log << config.subcommand << ": all checks passed\n";
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    try {
        config = parse(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const int code = execute(config, out);
        if (code != kExitOk)
            err << "invariant breach; see " << (config.out / "summary.json").string() << "\n";
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace skewlab::cli
