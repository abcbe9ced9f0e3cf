#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "beliefaudit/cli.hpp"

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    namespace cli = beliefaudit::cli;
    CLI::App app{"Belief function and lower prevision auditor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cli::version);

    cli::Options opt;
    std::string format = "human";
    std::string out_path;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "Seed for random probes")->capture_default_str();
        sub->add_option("--samples", opt.samples, "Number of random gambles per probe")->capture_default_str();
        sub->add_option("--tol", opt.tol, "Noise tolerance")->capture_default_str();
        sub->add_option("--payoff-range", opt.payoff_range, "Random payoffs are uniform in [-r, r]")
            ->capture_default_str();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "machine"}))
            ->capture_default_str();
        sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    };

    std::string input, model, gambles, ledger, to = "belief";

    auto* transform = app.add_subcommand("transform", "Convert between mass and belief tables");
    transform->add_option("input", input, "Mass table, belief table or model document")->required();
    transform->add_option("--to", to, "Target representation")->check(CLI::IsMember({"belief", "mass"}))
        ->capture_default_str();
    common(transform);

    auto* price = app.add_subcommand("price", "Buy and sell prices of gambles");
    price->add_option("model", model, "Model document")->required();
    price->add_option("gambles", gambles, "Gamble list document")->required();
    common(price);

    auto* audit = app.add_subcommand("audit", "Coherence, sure loss, probability and B-consistency audit");
    audit->add_option("model", model, "Model document")->required();
    common(audit);

    auto* dutchbook = app.add_subcommand("dutchbook", "Sure-loss exposure of a transaction ledger");
    dutchbook->add_option("model", model, "Model document")->required();
    dutchbook->add_option("ledger", ledger, "Ledger document")->required();
    common(dutchbook);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_schema;
    }

    opt.format = format == "machine" ? cli::Format::machine : cli::Format::human;
    opt.timestamp = utc_now();

    auto read = [](const std::string& path, std::string& text) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open '" << path << "'\n";
            return false;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        return true;
    };

    std::ostringstream out;
    int code = cli::exit_ok;
    std::string a, b;
    if (*transform) {
        if (!read(input, a)) return cli::exit_schema;
        code = cli::cmd_transform(a, to == "mass" ? cli::Direction::to_mass : cli::Direction::to_belief, opt, out,
                                  std::cerr);
    } else if (*price) {
        if (!read(model, a) || !read(gambles, b)) return cli::exit_schema;
        code = cli::cmd_price(a, b, opt, out, std::cerr);
    } else if (*audit) {
        if (!read(model, a)) return cli::exit_schema;
        code = cli::cmd_audit(a, opt, out, std::cerr);
    } else if (*dutchbook) {
        if (!read(model, a) || !read(ledger, b)) return cli::exit_schema;
        code = cli::cmd_dutchbook(a, b, opt, out, std::cerr);
    }

    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return cli::exit_schema;
        }
        f << out.str();
    }
    return code;
}
