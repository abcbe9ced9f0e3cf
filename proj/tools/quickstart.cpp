// Library walkthrough: price gambles under a lower envelope, look for a
// negative mass, and check the resulting certificate.

#include <cstdio>
#include <variant>

#include "beliefaudit/beliefaudit.hpp"

int main() {
    using namespace beliefaudit;

    const OutcomeSpace space = make_space({"1", "2", "3", "4"});
    const PriceModel pm = PriceModel::lower_envelope(space, {{0.5, 0.5, 0, 0}, {0.25, 0.25, 0.25, 0.25}});

    for (auto labels : {std::vector<std::string>{"2", "3", "4"}, {"2"}, {"2", "3"}, {"2", "4"}}) {
        const Gamble x = Gamble::indicator(space, space.subset(labels));
        std::printf("buy(1_%s) = %g, sell = %g\n", space.format(space.subset(labels)).c_str(), pm.buy(x),
                    pm.sell(x));
    }

    const SetFunction f = induced_set_function(pm);
    const auto mass = belief_to_mass(f);
    if (const auto* neg = std::get_if<NegativeMassReport>(&mass)) {
        for (const auto& [set, m] : neg->negatives) std::printf("m(%s) = %g\n", space.format(set).c_str(), m);
    }

    const AuditReport report = b_consistency_audit(pm, SamplePlan{});
    std::printf("B-consistent: %s\n", report.is_b_consistent ? "yes" : "no");
    if (report.certificate) {
        std::printf("certificate gap %g, verified %s\n", report.certificate->buy_gap,
                    verify_certificate(pm, *report.certificate) ? "yes" : "no");
    }
    return 0;
}
