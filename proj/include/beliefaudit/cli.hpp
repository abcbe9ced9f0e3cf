#pragma once

// Command implementations behind the beliefaudit executable. Each command
// writes its result to `out`, diagnostics to `err`, and returns the exit code.
//
// Exit codes: 0 success, 1 negative verdict (audit: not B-consistent;
// transform: negative mass), 2 schema or input error, 3 B1 violation,
// 4 internal error.

#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include "beliefaudit/audit.hpp"
#include "beliefaudit/io.hpp"
#include "beliefaudit/price_model.hpp"
#include "beliefaudit/set_function.hpp"

namespace beliefaudit::cli {

inline constexpr const char* version = "1.0.0";

enum class Format { human, machine };
enum class Direction { to_belief, to_mass };

enum ExitCode : int {
    exit_ok = 0,
    exit_negative = 1,
    exit_schema = 2,
    exit_b1 = 3,
    exit_internal = 4,
};

struct Options {
    std::uint64_t seed = 0;
    std::size_t samples = 256;
    double tol = 1e-9;
    double payoff_range = 1.0;
    Format format = Format::human;
    /// Value of the report's generated_at field.
    std::string timestamp;
};

namespace detail {

inline std::string num(double v) { return io::format_number(v); }

inline Tolerances tolerances(const Options& o) {
    Tolerances t;
    t.noise = o.tol;
    return t;
}

/// Runs a command body, translating library errors into exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const B1Violation& e) {
        err << "error: B1 violation: " << e.what() << "\n";
        return exit_b1;
    } catch (const io::SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return exit_schema;
    } catch (const SpaceMismatch& e) {
        err << "error: " << e.what() << "\n";
        return exit_schema;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return exit_schema;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

inline std::string describe(const Gamble& g) {
    if (g.is_indicator()) {
        SubsetMask a;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 1.0) a = a.with(i);
        }
        return "1_" + g.space().format(a);
    }
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ", " : "") + num(g[i]);
    return s + ")";
}

} // namespace detail

/// Converts a mass table to its belief table or a belief table (or any
/// model's induced set function) to its Moebius masses.
inline int cmd_transform(const std::string& input_text, Direction dir, const Options& opt, std::ostream& out,
                         std::ostream& err) {
    return detail::guarded(err, [&] {
        const auto input = io::read_table(io::parse(input_text));
        const OutcomeSpace& space = input.space;
        const Tolerances tol = detail::tolerances(opt);

        if (dir == Direction::to_belief) {
            std::vector<double> values;
            if (input.mass) {
                auto bel = mass_to_belief(*input.mass);
                values.assign(bel.values().begin(), bel.values().end());
            } else {
                values.assign(input.values->values().begin(), input.values->values().end());
            }
            if (opt.format == Format::machine) {
                out << io::dump(io::belief_table_json(space, values)) << "\n";
            } else {
                for (std::size_t a = 0; a < values.size(); ++a) {
                    out << std::left << std::setw(24) << space.format(SubsetMask{static_cast<std::uint32_t>(a)})
                        << " " << detail::num(values[a]) << "\n";
                }
            }
            return int(exit_ok);
        }

        if (input.mass) {
            if (opt.format == Format::machine) {
                io::json doc{{"outcomes", space.labels()}, {"kind", "mass"}, {"mass", io::mass_json(*input.mass)}};
                out << io::dump(doc) << "\n";
            } else {
                for (const auto& [set, w] : input.mass->focal_sets()) {
                    out << std::left << std::setw(24) << space.format(set) << " " << detail::num(w) << "\n";
                }
            }
            return int(exit_ok);
        }

        auto result = belief_to_mass(*input.values, tol);
        if (auto* m = std::get_if<MassFunction>(&result)) {
            if (opt.format == Format::machine) {
                io::json doc{{"outcomes", space.labels()}, {"kind", "mass"}, {"mass", io::mass_json(*m)}};
                out << io::dump(doc) << "\n";
            } else {
                for (const auto& [set, w] : m->focal_sets()) {
                    out << std::left << std::setw(24) << space.format(set) << " " << detail::num(w) << "\n";
                }
            }
            return int(exit_ok);
        }

        const auto& neg = std::get<NegativeMassReport>(result);
        if (opt.format == Format::machine) {
            io::json entries = io::json::array();
            for (std::size_t a = 1; a < neg.mobius.size(); ++a) {
                const double v = neg.mobius[a];
                if (std::abs(v) <= tol.noise) continue;
                const SubsetMask s{static_cast<std::uint32_t>(a)};
                entries.push_back(io::json{{"set", io::subset_json(space, s)}, {"weight", v}, {"negative", v < -tol.noise}});
            }
            io::json doc{{"outcomes", space.labels()}, {"kind", "mass"}, {"status", "negative"}, {"mass", entries}};
            out << io::dump(doc) << "\n";
        } else {
            for (std::size_t a = 1; a < neg.mobius.size(); ++a) {
                const double v = neg.mobius[a];
                if (std::abs(v) <= tol.noise) continue;
                const SubsetMask s{static_cast<std::uint32_t>(a)};
                out << std::left << std::setw(24) << space.format(s) << " " << detail::num(v)
                    << (v < -tol.noise ? "  NEGATIVE" : "") << "\n";
            }
            out << "not a belief function: " << neg.negatives.size() << " negative mass value(s)\n";
        }
        return int(exit_negative);
    });
}

/// Buy and sell price of every gamble in the list.
inline int cmd_price(const std::string& model_text, const std::string& gambles_text, const Options& opt,
                     std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const PriceModel pm = io::read_model(io::parse(model_text));
        const auto gambles = io::read_gambles(io::parse(gambles_text), pm.space());
        if (opt.format == Format::machine) {
            io::json prices = io::json::array();
            for (const auto& [name, g] : gambles) {
                prices.push_back(io::json{{"name", name}, {"buy", pm.buy(g)}, {"sell", pm.sell(g)}});
            }
            io::json doc{{"outcomes", pm.space().labels()}, {"model_kind", pm.kind()}, {"prices", prices}};
            out << io::dump(doc) << "\n";
        } else {
            out << std::left << std::setw(16) << "gamble" << std::setw(26) << "buy" << "sell\n";
            for (const auto& [name, g] : gambles) {
                out << std::left << std::setw(16) << name << std::setw(26) << detail::num(pm.buy(g))
                    << detail::num(pm.sell(g)) << "\n";
            }
        }
        return int(exit_ok);
    });
}

/// Full audit report. Exit 1 only when a verified certificate is attached.
inline int cmd_audit(const std::string& model_text, const Options& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const PriceModel pm = io::read_model(io::parse(model_text));
        if (opt.samples == 0) throw io::SchemaError("--samples must be at least 1");
        const SamplePlan plan{opt.samples, opt.payoff_range, opt.seed};
        const AuditReport r = b_consistency_audit(pm, plan, detail::tolerances(opt));

        if (opt.format == Format::machine) {
            io::ReportMeta meta{version, "fnv1a64:" + io::hex64(io::fnv1a64(model_text)), opt.timestamp};
            out << io::dump(io::report_json(r, meta)) << "\n";
        } else {
            const OutcomeSpace& space = r.space;
            out << "model: " << r.model_kind << " on " << space.format(space.full()) << "\n";
            out << "plan: seed " << plan.seed << ", samples " << plan.num_samples << ", payoff range "
                << detail::num(plan.payoff_range) << ", tolerance " << detail::num(r.tolerances.noise) << "\n";
            out << "coherence probes:\n";
            auto probe = [&](const char* name, const PropertyProbe& p) {
                out << "  " << std::left << std::setw(16) << name << p.passed << "/" << p.checked
                    << "  worst slack " << detail::num(p.worst_slack) << "\n";
            };
            probe("lower bound", r.coherence.lower_bound);
            probe("upper bound", r.coherence.upper_bound);
            probe("homogeneity", r.coherence.homogeneity);
            probe("superadditivity", r.coherence.superadditivity);
            probe("translation", r.coherence.translation);
            out << "sure loss: worst sampled exposure " << detail::num(r.sure_loss_worst) << "\n";
            out << "probability: " << (r.is_probability() ? "yes" : "no");
            if (r.probability.witness) {
                out << " (" << space.format(r.probability.witness->first) << " and "
                    << space.format(r.probability.witness->second) << " not additive, gap "
                    << detail::num(r.probability.gap) << ")";
            }
            out << "\n";
            if (const auto* m = std::get_if<MassFunction>(&r.induced_mass)) {
                out << "induced mass (" << m->focal_sets().size() << " focal sets):\n";
                for (const auto& [set, w] : m->focal_sets()) {
                    out << "  " << std::left << std::setw(24) << space.format(set) << detail::num(w) << "\n";
                }
                out << "choquet agreement: " << r.choquet_checks << " gambles, max gap "
                    << detail::num(r.choquet_max_gap) << "\n";
            } else {
                out << "induced mass: NEGATIVE\n";
                for (const auto& [set, v] : std::get<NegativeMassReport>(r.induced_mass).negatives) {
                    out << "  " << std::left << std::setw(24) << space.format(set) << detail::num(v) << "\n";
                }
            }
            out << "B-consistent: " << (r.is_b_consistent ? "yes" : "NO") << "\n";
            if (r.certificate) {
                const auto& c = *r.certificate;
                out << "certificate";
                if (const auto* k = std::get_if<ViolationCertificate::NegativeMass>(&c.kind)) {
                    out << " (negative mass " << detail::num(k->mass) << " at " << space.format(k->s0) << ")";
                } else {
                    out << " (choquet gap at " << detail::describe(std::get<ViolationCertificate::ChoquetGap>(c.kind).gamble)
                        << ")";
                }
                out << ":\n";
                for (const auto& g : c.xs) out << "  xs  " << std::left << std::setw(24) << detail::describe(g) << detail::num(pm.buy(g)) << "\n";
                for (const auto& g : c.ys) out << "  ys  " << std::left << std::setw(24) << detail::describe(g) << detail::num(pm.buy(g)) << "\n";
                out << "  buy gap " << detail::num(c.buy_gap) << (r.certificate_verified ? "  verified" : "  NOT VERIFIED")
                    << "\n";
            }
        }

        if (r.is_b_consistent) return int(exit_ok);
        if (!r.certificate || !r.certificate_verified) {
            err << "internal error: negative verdict without a verified certificate\n";
            return int(exit_internal);
        }
        return int(exit_negative);
    });
}

/// Worst-case net payoff of a ledger and the outcome attaining it.
inline int cmd_dutchbook(const std::string& model_text, const std::string& ledger_text, const Options& opt,
                         std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const PriceModel pm = io::read_model(io::parse(model_text));
        const TransactionLedger ledger = io::read_ledger(io::parse(ledger_text), pm);
        const Exposure e = sure_loss_exposure(pm, ledger);
        const bool book = e.is_dutch_book(detail::tolerances(opt));
        if (opt.format == Format::machine) {
            io::json doc{{"outcomes", pm.space().labels()},
                         {"exposure", e.value},
                         {"argmax_outcome", pm.space().label(e.outcome)},
                         {"dutch_book", book}};
            out << io::dump(doc) << "\n";
        } else {
            if (book) out << "*** DUTCH BOOK: the ledger loses money at every outcome ***\n";
            out << "exposure " << detail::num(e.value) << " at outcome " << pm.space().label(e.outcome) << "\n";
        }
        return int(exit_ok);
    });
}

} // namespace beliefaudit::cli
