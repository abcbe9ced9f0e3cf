#pragma once

// JSON documents for models, set-function tables, gamble lists, ledgers and
// audit reports. Numbers are written as decimals with 17 significant digits;
// subsets are written as label lists in canonical outcome order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "beliefaudit/audit.hpp"
#include "beliefaudit/errors.hpp"
#include "beliefaudit/gamble.hpp"
#include "beliefaudit/outcome_space.hpp"
#include "beliefaudit/price_model.hpp"
#include "beliefaudit/set_function.hpp"

namespace beliefaudit::io {

using json = nlohmann::ordered_json;

/// Input document does not follow its schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Writing

inline std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void write(std::string& out, const json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const bool pretty = indent > 0;
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ',';
            first = false;
            if (pretty) out += '\n' + pad;
            out += json(key).dump();
            out += pretty ? ": " : ":";
            write(out, value, indent, depth + 1);
        }
        if (pretty) out += '\n' + close_pad;
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        out += '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += flat && pretty ? ", " : ",";
            first = false;
            if (pretty && !flat) out += '\n' + pad;
            write(out, e, indent, depth + 1);
        }
        if (pretty && !flat) out += '\n' + close_pad;
        out += ']';
        return;
    }
    case json::value_t::number_float:
        out += format_number(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace detail

/// Serializes with 17 significant digits for floating point values.
inline std::string dump(const json& j, int indent = 2) {
    std::string out;
    detail::write(out, j, indent, 0);
    return out;
}

inline json subset_json(const OutcomeSpace& space, SubsetMask a) {
    return json(space.labels_of(a));
}

inline json gamble_json(const Gamble& g) {
    json j = json::object();
    if (g.is_indicator()) {
        SubsetMask a;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 1.0) a = a.with(i);
        }
        j["indicator"] = subset_json(g.space(), a);
    } else {
        j["payoff"] = json(std::vector<double>(g.payoff().begin(), g.payoff().end()));
    }
    return j;
}

inline json mass_json(const MassFunction& m) {
    json focal = json::array();
    for (const auto& [set, w] : m.focal_sets()) {
        focal.push_back(json{{"set", subset_json(m.space(), set)}, {"weight", w}});
    }
    return focal;
}

inline json model_json(const PriceModel& pm) {
    json j = json::object();
    j["outcomes"] = pm.space().labels();
    j["kind"] = pm.kind();
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Linear>) j["prob"] = r.prob;
            else if constexpr (std::is_same_v<T, Choquet>) j["mass"] = mass_json(r.mass);
            else j["rows"] = r.rows;
        },
        pm.representation());
    return j;
}

inline json belief_table_json(const OutcomeSpace& space, std::span<const double> values) {
    return json{{"outcomes", space.labels()},
                {"kind", "belief"},
                {"values", std::vector<double>(values.begin(), values.end())}};
}

// ---------------------------------------------------------------------------
// Reading

inline json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline double number(const json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
    return j.get<double>();
}

inline std::vector<double> numbers(const json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array of numbers");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(number(e, what));
    return v;
}

inline std::vector<std::string> strings(const json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array of strings");
    std::vector<std::string> v;
    for (const auto& e : j) {
        if (!e.is_string()) throw SchemaError(std::string(what) + " must contain strings");
        v.push_back(e.get<std::string>());
    }
    return v;
}

inline SubsetMask subset(const OutcomeSpace& space, const json& j) {
    auto labels = strings(j, "subset");
    try {
        return space.subset(std::span<const std::string>(labels));
    } catch (const InvalidArgument& e) {
        throw SchemaError(e.what());
    }
}

/// Runs a constructor, reporting payload invariant failures as schema errors.
template <class Fn>
auto validated(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const SchemaError&) {
        throw;
    } catch (const SizeOutOfRange& e) {
        throw SchemaError(e.what());
    } catch (const DuplicateLabel& e) {
        throw SchemaError(e.what());
    } catch (const InvalidArgument& e) {
        throw SchemaError(e.what());
    }
}

} // namespace detail

inline OutcomeSpace read_space(const json& doc) {
    auto labels = detail::strings(detail::field(doc, "outcomes"), "outcomes");
    return detail::validated([&] { return OutcomeSpace(std::move(labels)); });
}

/// Checks that a document's outcome list matches `space`.
inline void require_outcomes(const json& doc, const OutcomeSpace& space) {
    if (!(read_space(doc) == space)) throw SpaceMismatch();
}

inline MassFunction read_mass(const OutcomeSpace& space, const json& entries) {
    if (!entries.is_array()) throw SchemaError("'mass' must be an array of {set, weight} entries");
    std::vector<MassFunction::Entry> focal;
    for (const auto& e : entries) {
        const double w = detail::number(detail::field(e, "weight"), "weight");
        if (w == 0.0) continue;
        focal.emplace_back(detail::subset(space, detail::field(e, "set")), w);
    }
    return detail::validated([&] { return MassFunction(space, std::move(focal)); });
}

inline PriceModel read_model(const json& doc) {
    const OutcomeSpace space = read_space(doc);
    const json& kind = detail::field(doc, "kind");
    if (!kind.is_string()) throw SchemaError("'kind' must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "linear") {
        auto p = detail::numbers(detail::field(doc, "prob"), "prob");
        return detail::validated([&] { return PriceModel(space, Linear{std::move(p)}); });
    }
    if (k == "choquet") {
        return PriceModel(Choquet{read_mass(space, detail::field(doc, "mass"))});
    }
    if (k == "lower_envelope") {
        const json& rows = detail::field(doc, "rows");
        if (!rows.is_array()) throw SchemaError("'rows' must be an array of probability vectors");
        std::vector<std::vector<double>> r;
        for (const auto& row : rows) r.push_back(detail::numbers(row, "row"));
        return detail::validated([&] { return PriceModel(space, LowerEnvelope{std::move(r)}); });
    }
    throw SchemaError("unknown model kind '" + k + "'");
}

inline Gamble read_gamble(const OutcomeSpace& space, const json& j) {
    if (j.contains("indicator")) return Gamble::indicator(space, detail::subset(space, j.at("indicator")));
    if (j.contains("payoff")) {
        auto p = detail::numbers(j.at("payoff"), "payoff");
        return detail::validated([&] { return Gamble(space, std::move(p)); });
    }
    throw SchemaError("gamble needs 'payoff' or 'indicator'");
}

struct NamedGamble {
    std::string name;
    Gamble gamble;
};

inline std::vector<NamedGamble> read_gambles(const json& doc, const OutcomeSpace& space) {
    require_outcomes(doc, space);
    const json& list = detail::field(doc, "gambles");
    if (!list.is_array()) throw SchemaError("'gambles' must be an array");
    std::vector<NamedGamble> out;
    std::size_t k = 0;
    for (const auto& e : list) {
        std::string name = "X" + std::to_string(++k);
        if (e.contains("name")) {
            if (!e.at("name").is_string()) throw SchemaError("gamble name must be a string");
            name = e.at("name").get<std::string>();
        }
        out.push_back({std::move(name), read_gamble(space, e)});
    }
    return out;
}

/// Ledger entries without a "price" are priced at the model's buy or sell price.
inline TransactionLedger read_ledger(const json& doc, const PriceModel& pm) {
    require_outcomes(doc, pm.space());
    TransactionLedger ledger;
    auto side = [&](const char* key, bool buying, std::vector<Transaction>& out) {
        if (!doc.contains(key)) return;
        const json& list = doc.at(key);
        if (!list.is_array()) throw SchemaError(std::string("'") + key + "' must be an array");
        for (const auto& e : list) {
            Gamble g = read_gamble(pm.space(), e);
            double price = buying ? pm.buy(g) : pm.sell(g);
            if (e.contains("price")) price = detail::number(e.at("price"), "price");
            out.push_back({std::move(g), price});
        }
    };
    side("buys", true, ledger.buys);
    side("sells", false, ledger.sells);
    if (ledger.buys.empty() && ledger.sells.empty()) throw SchemaError("ledger has no transactions");
    return ledger;
}

/// Set-function input for the transform command: a model document, a mass
/// table or a dense belief table.
struct TableInput {
    OutcomeSpace space;
    std::optional<MassFunction> mass;
    std::optional<SetFunction> values;
};

inline TableInput read_table(const json& doc) {
    const OutcomeSpace space = read_space(doc);
    const std::string k = detail::field(doc, "kind").is_string() ? doc.at("kind").get<std::string>() : "";
    if (k == "mass") return {space, read_mass(space, detail::field(doc, "mass")), std::nullopt};
    if (k == "belief") {
        auto v = detail::numbers(detail::field(doc, "values"), "values");
        return {space, std::nullopt, detail::validated([&] { return SetFunction(space, std::move(v)); })};
    }
    const PriceModel pm = read_model(doc);
    if (const auto* ch = std::get_if<Choquet>(&pm.representation())) return {space, ch->mass, std::nullopt};
    return {space, std::nullopt, induced_set_function(pm)};
}

// ---------------------------------------------------------------------------
// Reports

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline json probe_json(const PropertyProbe& p) {
    return json{{"checked", p.checked}, {"passed", p.passed}, {"worst_slack", p.worst_slack}};
}

inline json certificate_json(const OutcomeSpace& space, const ViolationCertificate& cert, bool verified) {
    json j = json::object();
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ViolationCertificate::NegativeMass>) {
                j["kind"] = "negative_mass";
                j["s0"] = subset_json(space, k.s0);
                j["mass"] = k.mass;
            } else {
                j["kind"] = "choquet_gap";
                j["gamble"] = gamble_json(k.gamble);
            }
        },
        cert.kind);
    json xs = json::array(), ys = json::array();
    for (const auto& g : cert.xs) xs.push_back(gamble_json(g));
    for (const auto& g : cert.ys) ys.push_back(gamble_json(g));
    j["xs"] = xs;
    j["ys"] = ys;
    j["buy_gap"] = cert.buy_gap;
    j["verified"] = verified;
    return j;
}

struct ReportMeta {
    std::string version;
    std::string input_digest;
    std::string generated_at;
};

inline json report_json(const AuditReport& r, const ReportMeta& meta) {
    const OutcomeSpace& space = r.space;
    json j = json::object();
    j["tool"] = "beliefaudit";
    j["version"] = meta.version;
    j["generated_at"] = meta.generated_at;
    j["input_digest"] = meta.input_digest;
    j["seed"] = r.plan.seed;
    j["samples"] = r.plan.num_samples;
    j["payoff_range"] = r.plan.payoff_range;
    j["tolerances"] = json{{"noise", r.tolerances.noise}, {"exact", r.tolerances.exact}};
    j["outcomes"] = space.labels();
    j["model_kind"] = r.model_kind;
    j["coherence"] = json{{"lower_bound", probe_json(r.coherence.lower_bound)},
                          {"upper_bound", probe_json(r.coherence.upper_bound)},
                          {"homogeneity", probe_json(r.coherence.homogeneity)},
                          {"superadditivity", probe_json(r.coherence.superadditivity)},
                          {"translation", probe_json(r.coherence.translation)}};
    j["sure_loss_worst"] = r.sure_loss_worst;
    j["is_probability"] = r.probability.is_probability;
    if (r.probability.witness) {
        j["probability_witness"] = json{{"a", subset_json(space, r.probability.witness->first)},
                                        {"b", subset_json(space, r.probability.witness->second)},
                                        {"gap", r.probability.gap}};
    } else {
        j["probability_witness"] = nullptr;
    }
    j["is_b_consistent"] = r.is_b_consistent;
    if (const auto* m = std::get_if<MassFunction>(&r.induced_mass)) {
        j["induced_mass"] = json{{"status", "nonnegative"}, {"focal", mass_json(*m)}};
    } else {
        const auto& neg = std::get<NegativeMassReport>(r.induced_mass);
        json negatives = json::array();
        for (const auto& [set, v] : neg.negatives) {
            negatives.push_back(json{{"set", subset_json(space, set)}, {"value", v}});
        }
        j["induced_mass"] = json{{"status", "negative"}, {"negative", negatives}};
    }
    j["choquet_checks"] = r.choquet_checks;
    j["choquet_max_gap"] = r.choquet_max_gap;
    j["certificate"] = r.certificate ? certificate_json(space, *r.certificate, r.certificate_verified) : json(nullptr);
    return j;
}

} // namespace beliefaudit::io
