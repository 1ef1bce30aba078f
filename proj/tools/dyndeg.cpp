#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <dyndeg/system_io.hpp>

using namespace dyndeg;

namespace
{

enum Exit { ok = 0, failed = 1, bad_input = 2, unsupported = 3 };

struct Common {
    std::string file;
    std::optional<std::uint64_t> seed;
    std::optional<int> n;
    std::optional<int> p;
    std::optional<unsigned long> power;
    std::optional<double> tolerance;
    bool json_out = false;
};

void add_common(CLI::App *cmd, Common &c, bool with_json_flag)
{
    cmd->add_option("file", c.file, "system description (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "seed for random base points and conjugations");
    cmd->add_option("--n", c.n, "number of iterates N")->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", c.tolerance, "tolerance for estimated profiles")->check(CLI::PositiveNumber);
    if (with_json_flag) {
        cmd->add_flag("--json", c.json_out, "print a JSON record instead of text");
    }
}

SystemDescription load(const Common &c)
{
    SystemDescription d = parse_system_file(c.file);
    if (c.seed) {
        d.options.seed = *c.seed;
    }
    if (c.n) {
        d.options.n = *c.n;
    }
    if (c.p) {
        d.options.p = *c.p;
    }
    if (c.power) {
        d.options.power = *c.power;
    }
    if (c.tolerance) {
        d.options.tolerance = *c.tolerance;
    }
    return d;
}

int cmd_degrees(const Common &c)
{
    SystemDescription d = load(c);
    auto profiles = compute_profiles(d);
    if (c.json_out) {
        std::cout << json{{"kind", kind_name(d.kind)}, {"profiles", profiles_json(profiles)}}.dump(2) << "\n";
        return ok;
    }
    for (const auto &np : profiles) {
        if (profiles.size() > 1) {
            std::cout << np.name << ": ";
        }
        std::cout << profile_line(np) << "\n";
    }
    return ok;
}

int cmd_sequence(const Common &c)
{
    SystemDescription d = load(c);
    json seq = compute_sequences(d, d.options.p, d.options.n);
    if (c.json_out) {
        std::cout << seq.dump(2) << "\n";
    } else {
        std::cout << sequences_text(seq);
    }
    return ok;
}

int cmd_verify(const Common &c, const std::string &check)
{
    SystemDescription d = load(c);
    CheckOutcome out = run_check(d, check);
    if (c.json_out) {
        std::cout << outcome_json(out).dump(2) << "\n";
    } else {
        std::cout << check << ": " << to_string(out.verdict) << "\n";
        for (const auto &line : out.lines) {
            std::cout << "  " << line << "\n";
        }
    }
    switch (out.verdict) {
    case Verdict::pass:
        return ok;
    case Verdict::fail:
        return failed;
    case Verdict::unsupported:
        return unsupported;
    }
    return failed;
}

int cmd_report(const Common &c, const std::string &out_path)
{
    SystemDescription d = load(c);
    json rep = build_report(d);
    std::ofstream out(out_path);
    if (!out) {
        throw input_error("cannot write '" + out_path + "'");
    }
    out << rep.dump(2) << "\n";
    bool any_fail = false;
    for (const auto &chk : rep["checks"]) {
        std::cout << chk["name"].get<std::string>() << ": " << chk["verdict"].get<std::string>() << "\n";
        any_fail = any_fail || chk["verdict"] == "fail";
    }
    return any_fail ? failed : ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Dynamical degrees of monomial, rational and fibered maps"};
    app.require_subcommand(1);

    Common common;
    std::string check;
    std::string report_path;

    auto *degrees = app.add_subcommand("degrees", "dynamical degree profiles");
    add_common(degrees, common, true);

    auto *sequence = app.add_subcommand("sequence", "degree sequences lambda_p(f^n)");
    add_common(sequence, common, true);
    sequence->add_option("--p", common.p, "order p")->check(CLI::NonNegativeNumber);

    auto *verify = app.add_subcommand("verify", "run one verification");
    add_common(verify, common, true);
    verify->add_option("--check", check, "which check")->required()->check(CLI::IsMember(check_names()));
    verify->add_option("--p", common.p, "order p for lemma4.2")->check(CLI::NonNegativeNumber);
    verify->add_option("--power", common.power, "exponent for powerrule")->check(CLI::PositiveNumber);

    auto *report = app.add_subcommand("report", "all checks, written as a JSON report");
    add_common(report, common, false);
    report->add_option("--json", report_path, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return bad_input;
    }

    try {
        if (*degrees) {
            return cmd_degrees(common);
        }
        if (*sequence) {
            return cmd_sequence(common);
        }
        if (*verify) {
            return cmd_verify(common, check);
        }
        return cmd_report(common, report_path);
    } catch (const input_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    } catch (const unsupported_error &e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return unsupported;
    } catch (const math_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    } catch (const root_finding_error &e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return unsupported;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: malformed record: " << e.what() << "\n";
        return bad_input;
    }
}
