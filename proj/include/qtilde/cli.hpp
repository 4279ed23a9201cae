#pragma once

#include "qtilde/qtilde.hpp"
#include "qtilde/spec_json.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace qtilde::cli {

// Exit codes: 0 success, 1 I/O or parse errors, 2 validation failure,
// 3 precondition failure.
inline constexpr int kOk = 0;
inline constexpr int kParse = 1;
inline constexpr int kValidation = 2;
inline constexpr int kPrecondition = 3;

namespace detail {

inline std::vector<int> parse_base(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw parse_error("bad digit '" + tok + "' in base '" + s + "'");
        out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline void print_violations(const ValidationReport& rep, std::ostream& os) {
    for (const auto& v : rep.violations)
        os << v.column << ": condition " << v.condition << ": " << v.detail << "\n";
}

// Loads and gates a spec: hard violations abort with exit 2, 4-degree
// partial-sum violations only warn; the classification results stay
// meaningful without condition 4.
inline SystemSpec load_checked(const std::string& path, std::ostream& err) {
    SystemSpec spec = load_system_spec(path);
    ValidationReport rep = validate(spec);
    if (!rep.ok) {
        if (rep.only_condition4()) {
            err << "warning: condition 4 violations (partial p-sums); proceeding\n";
            print_violations(rep, err);
        } else {
            print_violations(rep, err);
            throw spec_error("spec failed validation");
        }
    }
    return spec;
}

inline void print_value(std::ostream& out, const std::string& label, const Rational& v,
                        int prec) {
    out << label << "=" << rational_string(v) << " (" << decimal_string(v, prec) << ")\n";
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"variable-alphabet Q~/nega-Q~ representations and the function F"};
    app.require_subcommand(1);

    std::string spec_path, digits_str, base_str, x_str, tol_str = "1e-9", out_path, rep_str;
    long depth = 30, k = 0, n_col = 1, count = 1000, grid = 256, oracle_depth = -1;
    std::uint64_t seed = 0;
    int prec = 12;

    auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    };

    auto* c_validate = app.add_subcommand("validate", "check spec conditions");
    add_spec(c_validate);

    auto* c_encode = app.add_subcommand("encode", "digits of x");
    add_spec(c_encode);
    c_encode->add_option("--rep", rep_str, "plus|nega")->required();
    c_encode->add_option("--x", x_str, "rational in [0,1]")->required();
    c_encode->add_option("--depth", depth, "number of digits");

    auto* c_decode = app.add_subcommand("decode", "value of a digit string");
    add_spec(c_decode);
    c_decode->add_option("--digits", digits_str, "kind:prefix:tail")->required();
    c_decode->add_option("--prec", prec, "decimal digits");

    auto* c_eval = app.add_subcommand("eval", "F at a digit string or point");
    add_spec(c_eval);
    c_eval->add_option("--digits", digits_str, "kind:prefix:tail");
    c_eval->add_option("--x", x_str, "rational in [0,1]");
    c_eval->add_option("--tol", tol_str, "error tolerance for --x");
    c_eval->add_option("--prec", prec, "decimal digits");

    auto* c_shift = app.add_subcommand("shift", "drop leading digits");
    add_spec(c_shift);
    c_shift->add_option("--digits", digits_str, "plus digit string")->required();
    c_shift->add_option("--k", k, "shift count")->required();
    c_shift->add_option("--prec", prec, "decimal digits");

    auto* c_increment = app.add_subcommand("increment", "mu_F of a cylinder");
    add_spec(c_increment);
    c_increment->add_option("--base", base_str, "comma digits, e.g. 1,0,2")->required();
    c_increment->add_option("--prec", prec, "decimal digits");

    auto* c_classify = app.add_subcommand("classify", "monotonicity, differentiability, singularity");
    add_spec(c_classify);

    auto* c_integral = app.add_subcommand("integral", "Lebesgue integral of F");
    add_spec(c_integral);
    c_integral->add_option("--oracle-depth", oracle_depth, "also print the Darboux bracket");
    c_integral->add_option("--prec", prec, "decimal digits");

    auto* c_sample = app.add_subcommand("sample", "draw from the distribution of F");
    add_spec(c_sample);
    c_sample->add_option("--seed", seed, "stream seed")->required();
    c_sample->add_option("--count", count, "number of samples")->required();
    c_sample->add_option("--depth", depth, "digits per sample");

    auto* c_cdf = app.add_subcommand("cdf-test", "empirical CDF vs F");
    add_spec(c_cdf);
    c_cdf->add_option("--seed", seed, "stream seed")->required();
    c_cdf->add_option("--count", count, "number of samples")->required();
    c_cdf->add_option("--grid", grid, "grid size");
    c_cdf->add_option("--depth", depth, "digits per sample");
    c_cdf->add_option("--prec", prec, "decimal digits");

    auto* c_graph = app.add_subcommand("graph", "graph endpoints as CSV");
    add_spec(c_graph);
    c_graph->add_option("--depth", depth, "cylinder rank")->required();
    c_graph->add_option("--out", out_path, "output CSV file")->required();
    c_graph->add_option("--prec", prec, "decimal digits");

    auto* c_ifs = app.add_subcommand("ifs", "self-affine maps of column n");
    add_spec(c_ifs);
    c_ifs->add_option("--n", n_col, "column index")->required();

    try {
        std::vector<const char*> argv;
        argv.push_back("qtilde");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (app.got_subcommand(c_validate)) {
            SystemSpec spec = load_system_spec(spec_path);
            ValidationReport rep = validate(spec);
            if (rep.ok) {
                out << "ok\n";
                return kOk;
            }
            out << "violations=" << rep.violations.size() << "\n";
            detail::print_violations(rep, out);
            return kValidation;
        }

        if (app.got_subcommand(c_encode)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            RepKind kind;
            if (rep_str == "plus") kind = RepKind::Plus;
            else if (rep_str == "nega") kind = RepKind::Nega;
            else throw parse_error("--rep must be plus or nega");
            Rational x = parse_rational(x_str);
            DigitString d = encode(spec, kind, x, depth);
            out << "digits=" << format_digit_string(d) << "\n";
            out << "exact=" << (tail_is_symbolic(d.tail) ? "true" : "false") << "\n";
            return kOk;
        }

        if (app.got_subcommand(c_decode)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            DigitString d = parse_digit_string(digits_str);
            EvalResult r = decode(spec, d);
            detail::print_value(out, "value", r.value, prec);
            if (!r.exact())
                detail::print_value(out, "error_bound", r.error_bound, prec);
            return kOk;
        }

        if (app.got_subcommand(c_eval)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            EvalResult r;
            if (!digits_str.empty())
                r = eval_F(spec, parse_digit_string(digits_str));
            else if (!x_str.empty())
                r = eval_F_at(spec, parse_rational(x_str), parse_rational(tol_str));
            else
                throw parse_error("eval needs --digits or --x");
            detail::print_value(out, "value", r.value, prec);
            if (!r.exact())
                detail::print_value(out, "error_bound", r.error_bound, prec);
            return kOk;
        }

        if (app.got_subcommand(c_shift)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            ShiftResult r = shift(spec, parse_digit_string(digits_str), k);
            out << "digits=" << format_digit_string(r.digits) << "\n";
            detail::print_value(out, "value", r.value.value, prec);
            if (!r.value.exact())
                detail::print_value(out, "error_bound", r.value.error_bound, prec);
            return kOk;
        }

        if (app.got_subcommand(c_increment)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            Rational mu = increment(spec, detail::parse_base(base_str));
            detail::print_value(out, "increment", mu, prec);
            return kOk;
        }

        if (app.got_subcommand(c_classify)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            NowhereDiffReport nd = check_nowhere_differentiability(spec);
            SingularityReport sg = singularity_check(spec);
            out << to_string(classify_monotonicity(spec)) << "; nowhere-differentiable: "
                << (nd.verdict ? "true" : "false") << "; singularity: " << to_string(sg.verdict)
                << "\n";
            err << "nowhere-differentiable detail: " << nd.detail << "\n";
            err << "singularity detail: " << sg.detail << "\n";
            if (!ifs_hypothesis_holds(spec))
                err << "note: some p entries are zero; the self-affine decomposition of the graph needs p != 0\n";
            return kOk;
        }

        if (app.got_subcommand(c_integral)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            IntegralResult r = integral_closed_form(spec);
            detail::print_value(out, "integral", r.value, prec);
            if (oracle_depth >= 0) {
                auto [low, high] = integral_oracle(spec, oracle_depth);
                detail::print_value(out, "oracle_low", low, prec);
                detail::print_value(out, "oracle_high", high, prec);
                detail::print_value(out, "oracle_width", high - low, prec);
            }
            return kOk;
        }

        if (app.got_subcommand(c_sample)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            SampleBatch batch = sample(spec, seed, count, depth);
            out << "# generator=" << kGeneratorId << "\n";
            out << "# seed=" << seed << " count=" << count << " depth=" << depth << "\n";
            out << "index,value_num/den,value_decimal\n";
            for (size_t i = 0; i < batch.values.size(); ++i)
                out << i << "," << rational_string(batch.values[i]) << ","
                    << decimal_string(batch.values[i], prec) << "\n";
            return kOk;
        }

        if (app.got_subcommand(c_cdf)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            SampleBatch batch = sample(spec, seed, count, depth);
            Rational d = cdf_distance(spec, batch, grid);
            detail::print_value(out, "sup_distance", d, prec);
            return kOk;
        }

        if (app.got_subcommand(c_graph)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            long cap = 2'000'000;
            if (const char* env = std::getenv("QTILDE_MAX_POINTS"))
                cap = std::atol(env);
            auto pts = graph_points(spec, depth, cap);
            std::ofstream f(out_path);
            if (!f)
                throw parse_error("cannot open output file '" + out_path + "'");
            f << "x_num/x_den,y_num/y_den,x_decimal,y_decimal\n";
            for (const auto& [x, y] : pts)
                f << rational_string(x) << "," << rational_string(y) << ","
                  << decimal_string(x, prec) << "," << decimal_string(y, prec) << "\n";
            out << "points=" << pts.size() << " file=" << out_path << "\n";
            return kOk;
        }

        if (app.got_subcommand(c_ifs)) {
            SystemSpec spec = detail::load_checked(spec_path, err);
            if (!ifs_hypothesis_holds(spec))
                err << "warning: some p entries are zero; the self-affine decomposition of the graph needs p != 0\n";
            auto maps = ifs_maps(spec, n_col);
            for (size_t i = 0; i < maps.size(); ++i)
                out << n_col << "," << i << "," << rational_string(maps[i].x_offset) << ","
                    << rational_string(maps[i].x_scale) << ","
                    << rational_string(maps[i].y_offset) << ","
                    << rational_string(maps[i].y_scale) << "\n";
            return kOk;
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    } catch (const spec_error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const precondition_error& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    }
    return kParse;
}

} // namespace qtilde::cli
