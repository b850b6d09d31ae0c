#include "dplab/cli.hpp"

#include "dplab/errors.hpp"
#include "dplab/resolvent.hpp"
#include "dplab/resonance.hpp"
#include "dplab/scattering.hpp"
#include "dplab/shape_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <optional>
#include <sstream>

namespace dplab::cli {

namespace {

double parse_number(std::string_view text)
{
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (std::exception const&) {
        throw ValidationError(fmt::format("'{}' is not a number", text));
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw ValidationError(fmt::format("'{}' is not a finite number", text));
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

} // namespace

std::vector<double> parse_grid(std::string_view text)
{
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw ValidationError(fmt::format("grid '{}' must read start:stop:step", text));
        }
        double start = parse_number(parts[0]);
        double stop = parse_number(parts[1]);
        double step = parse_number(parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw ValidationError(fmt::format("grid '{}' needs step > 0 and stop >= start", text));
        }
        auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
        for (std::size_t i = 0; i <= n; ++i) {
            out.push_back(start + static_cast<double>(i) * step);
        }
    } else {
        for (auto part : split(text, ',')) {
            out.push_back(parse_number(part));
        }
    }
    if (out.empty()) {
        throw ValidationError("empty grid");
    }
    return out;
}

std::pair<double, double> parse_window(std::string_view text)
{
    auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw ValidationError(fmt::format("window '{}' must read lo:hi", text));
    }
    double lo = parse_number(parts[0]);
    double hi = parse_number(parts[1]);
    if (lo > hi) {
        throw ValidationError(fmt::format("window '{}' has lo > hi", text));
    }
    return {lo, hi};
}

std::string format_number(double v)
{
    if (!std::isfinite(v)) {
        throw NumericalError("non-finite value in output");
    }
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

struct ShapeArgs {
    std::string phi_path;
    std::string psi_path;

    ShapePotential phi() const { return load_shape(phi_path); }
    ShapePotential psi() const
    {
        return psi_path.empty() ? ShapePotential::zero() : load_shape(psi_path);
    }
};

std::string csv_row(std::initializer_list<double> values)
{
    std::string line;
    for (double v : values) {
        if (!line.empty()) {
            line += ',';
        }
        line += format_number(v);
    }
    line += '\n';
    return line;
}

json number(double v)
{
    if (!std::isfinite(v)) {
        throw NumericalError("non-finite value in output");
    }
    return v;
}

json complex_json(std::complex<double> z)
{
    return {{"re", number(z.real())}, {"im", number(z.imag())}};
}

std::vector<std::string> normalize_negative_values(const std::vector<std::string>& args)
{
    // "--window -1:30" would otherwise read "-1:30" as a short option
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto const& a = args[i];
        bool long_opt = a.size() > 2 && a.rfind("--", 0) == 0 && a.find('=') == std::string::npos;
        if (long_opt && i + 1 < args.size()) {
            auto const& next = args[i + 1];
            if (next.size() > 1 && next[0] == '-' &&
                (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
                out.push_back(a + "=" + next);
                ++i;
                continue;
            }
        }
        out.push_back(a);
    }
    return out;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Squeezed (alpha delta' + beta delta)-like potentials: resonances, scattering "
                 "and resolvent convergence"};
    app.name("dplab");
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "write results here instead of stdout");

    ShapeArgs shapes;
    auto add_shapes = [&](CLI::App* sub, bool psi_required) {
        sub->add_option("--phi", shapes.phi_path, "shape file for Phi")->required();
        auto* opt = sub->add_option("--psi", shapes.psi_path, "shape file for Psi");
        if (psi_required) {
            opt->required();
        }
        sub->add_option("--out", out_path, "write results here instead of stdout");
    };

    double tol = kDefaultMomentTol;
    auto* moments_cmd = app.add_subcommand("moments", "moments and distributional-limit class");
    add_shapes(moments_cmd, true);
    moments_cmd->add_option("--tol", tol, "classification tolerance");

    std::string window = "-50:50";
    double step = 0.05;
    double root_tol = 1e-10;
    auto* res_cmd = app.add_subcommand("resonances", "resonant set with theta and kappa (CSV)");
    add_shapes(res_cmd, false);
    res_cmd->add_option("--window", window, "alpha window lo:hi");
    res_cmd->add_option("--step", step, "scan step");
    res_cmd->add_option("--root-tol", root_tol, "root tolerance");

    std::string alpha_text;
    double beta = 0.0;
    std::string eps_text;
    std::string k_text;
    std::string incidence = "left";
    auto* scatter_cmd = app.add_subcommand("scatter", "finite-eps and limit scattering (JSON)");
    add_shapes(scatter_cmd, false);
    scatter_cmd->add_option("--alpha", alpha_text)->required();
    scatter_cmd->add_option("--beta", beta);
    scatter_cmd->add_option("--eps", eps_text)->required();
    scatter_cmd->add_option("--k", k_text)->required();
    scatter_cmd->add_option("--incidence", incidence)->check(CLI::IsMember({"left", "right"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "transmission over parameter grids (CSV)");
    add_shapes(sweep_cmd, false);
    sweep_cmd->add_option("--alpha", alpha_text, "grid")->required();
    sweep_cmd->add_option("--beta", beta);
    sweep_cmd->add_option("--eps", eps_text, "grid")->required();
    sweep_cmd->add_option("--k", k_text, "grid")->required();

    auto* conv_cmd = app.add_subcommand("converge", "scattering convergence as eps -> 0 (CSV)");
    add_shapes(conv_cmd, false);
    conv_cmd->add_option("--alpha", alpha_text)->required();
    conv_cmd->add_option("--beta", beta);
    conv_cmd->add_option("--k", k_text)->required();
    conv_cmd->add_option("--eps", eps_text, "decreasing list (default 2^-3..2^-9)");

    double zeta_re = 0.0;
    double zeta_im = 2.0;
    double half_width = 8.0;
    double cells_per_eps = 64.0;
    std::string f_name = "box";
    std::string f_file;
    std::string boundary = "transparent";
    std::string trace_path;
    auto* resolve_cmd = app.add_subcommand("resolve", "resolvent convergence as eps -> 0 (CSV)");
    add_shapes(resolve_cmd, false);
    resolve_cmd->add_option("--alpha", alpha_text)->required();
    resolve_cmd->add_option("--beta", beta);
    resolve_cmd->add_option("--eps", eps_text, "decreasing list (default 2^-3..2^-7)");
    resolve_cmd->add_option("--zeta-re", zeta_re);
    resolve_cmd->add_option("--zeta-im", zeta_im);
    resolve_cmd->add_option("--L", half_width, "grid half width");
    resolve_cmd->add_option("--cells-per-eps", cells_per_eps);
    resolve_cmd->add_option("--f", f_name, "box | centered | hat | bump");
    resolve_cmd->add_option("--f-file", f_file, "right-hand side as a piecewise JSON file");
    resolve_cmd->add_option("--boundary", boundary)
        ->check(CLI::IsMember({"transparent", "dirichlet"}));
    resolve_cmd->add_option("--trace", trace_path,
                            "write x,ReY,ImY of the smallest-eps solution here");

    auto args = normalize_negative_values(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return kExitOk;
    } catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (CLI::ParseError const& e) {
        err << "dplab: " << e.what() << '\n';
        return kExitValidation;
    }

    std::string command = app.get_subcommands().front()->get_name();
    std::ostringstream result;
    try {
        auto single = [](std::string const& text, char const* name) {
            auto g = parse_grid(text);
            if (g.size() != 1) {
                throw ValidationError(fmt::format("--{} takes a single value here", name));
            }
            return g.front();
        };
        auto eps_list_or = [&](std::vector<double> fallback) {
            return eps_text.empty() ? fallback : parse_grid(eps_text);
        };

        if (command == "moments") {
            auto phi = shapes.phi();
            auto psi = shapes.psi();
            auto rep = moments(phi, psi, tol);
            json doc{{"phi", phi.label()},
                     {"psi", psi.label()},
                     {"m0_phi", number(rep.m0_phi)},
                     {"m1_phi", number(rep.m1_phi)},
                     {"m0_psi", number(rep.m0_psi)},
                     {"tol", number(tol)},
                     {"classification", std::string(to_string(rep.classification))}};
            result << doc.dump(2) << '\n';
        } else if (command == "resonances") {
            auto [lo, hi] = parse_window(window);
            ScanOptions opts;
            opts.alpha_min = lo;
            opts.alpha_max = hi;
            opts.step = step;
            opts.root_tol = root_tol;
            auto set = scan_resonances(shapes.phi(), shapes.psi(), opts);
            result << "alpha,theta,kappa,residual\n";
            for (auto const& r : set.records) {
                result << csv_row({r.alpha, r.theta, r.kappa, r.residual});
            }
            for (double a : set.tangential_warnings) {
                err << "dplab: warning: possible tangential root near alpha = "
                    << format_number(a) << '\n';
            }
        } else if (command == "scatter") {
            auto phi = shapes.phi();
            auto psi = shapes.psi();
            double alpha = single(alpha_text, "alpha");
            double eps = single(eps_text, "eps");
            double k = single(k_text, "k");
            auto inc = incidence == "right" ? Incidence::Right : Incidence::Left;
            auto d = scatter_finite(phi, psi, alpha, beta, eps, k, {}, inc);
            auto lim = inc == Incidence::Right
                           ? scatter_limit(phi.reflected(), psi.reflected(), alpha, beta, k)
                           : scatter_limit(phi, psi, alpha, beta, k);
            json limit{{"resonant", lim.resonant},
                       {"R", complex_json(lim.R)},
                       {"T", complex_json(lim.T)},
                       {"T2", number(std::norm(lim.T))}};
            if (lim.resonant) {
                limit["theta"] = number(lim.theta);
                limit["kappa"] = number(lim.kappa);
            }
            json doc{{"alpha", number(alpha)},
                     {"beta", number(beta)},
                     {"eps", number(eps)},
                     {"k", number(k)},
                     {"incidence", incidence},
                     {"R", complex_json(d.R)},
                     {"T", complex_json(d.T)},
                     {"R2", number(d.reflection())},
                     {"T2", number(d.transmission())},
                     {"wronskian_defect", number(d.wronskian_defect)},
                     {"limit", limit}};
            result << doc.dump(2) << '\n';
        } else if (command == "sweep") {
            auto alphas = parse_grid(alpha_text);
            auto ks = parse_grid(k_text);
            auto es = parse_grid(eps_text);
            auto rows = sweep(shapes.phi(), shapes.psi(), beta, alphas, ks, es);
            result << "alpha,k,eps,ReR,ImR,ReT,ImT,T2\n";
            for (auto const& r : rows) {
                result << csv_row({r.alpha, r.k, r.eps, r.R.real(), r.R.imag(), r.T.real(),
                                   r.T.imag(), r.T2});
            }
        } else if (command == "converge") {
            double alpha = single(alpha_text, "alpha");
            double k = single(k_text, "k");
            auto es = eps_list_or(default_eps_list());
            auto rep = scattering_convergence(shapes.phi(), shapes.psi(), alpha, beta, k, es);
            result << "eps,errR,errT,fitted_order\n";
            for (auto const& r : rep.rows) {
                result << csv_row({r.eps, r.err_R, r.err_T, rep.order});
            }
        } else if (command == "resolve") {
            auto phi = shapes.phi();
            auto psi = shapes.psi();
            double alpha = single(alpha_text, "alpha");
            auto es = eps_list_or({0.125, 0.0625, 0.03125, 0.015625, 0.0078125});
            ResolventProbe probe;
            probe.f = f_file.empty() ? probe_function(f_name) : load_piecewise(f_file);
            probe.zeta = {zeta_re, zeta_im};
            probe.half_width = half_width;
            ResolventErrorOptions opts;
            opts.cells_per_eps = cells_per_eps;
            opts.boundary =
                boundary == "dirichlet" ? OuterBoundary::Dirichlet : OuterBoundary::Transparent;
            auto rep = resolvent_error(phi, psi, alpha, beta, es, probe, opts);
            result << "eps,h,error_L2,fitted_order\n";
            for (auto const& r : rep.rows) {
                result << csv_row({r.eps, r.h, r.error_l2, rep.order});
            }
            if (!trace_path.empty()) {
                probe.grid_step = es.back() / cells_per_eps;
                auto t = solve_eps_resolvent(phi, psi, alpha, beta, es.back(), probe,
                                             opts.boundary);
                std::ofstream tf(trace_path);
                if (!tf) {
                    throw ValidationError(fmt::format("cannot write '{}'", trace_path));
                }
                tf << "x,ReY,ImY\n";
                for (std::size_t j = 0; j < t.x.size(); ++j) {
                    tf << csv_row({t.x[j], t.y[j].real(), t.y[j].imag()});
                }
            }
        }
    } catch (ValidationError const& e) {
        err << "dplab " << command << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (Error const& e) {
        err << "dplab " << command << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (std::exception const& e) {
        err << "dplab " << command << ": " << e.what() << '\n';
        return kExitNumerical;
    }

    if (out_path.empty()) {
        out << result.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "dplab: cannot write '" << out_path << "'\n";
            return kExitValidation;
        }
        f << result.str();
    }
    return kExitOk;
}

} // namespace dplab::cli
