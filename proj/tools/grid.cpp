#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include <fdrclass/error.hpp>
#include <fdrclass/format.hpp>
#include <fdrclass/model.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/threshold.hpp>

#include "cli.hpp"

namespace fdrclass::cli {

namespace {

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

std::vector<double> default_lattice(std::size_t n)
{
    if (n < 1) {
        throw DomainError("--grid-size must be >= 1");
    }
    if (n == 1) {
        return {0.5};
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = 0.025 + 0.95 * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

void require_increasing(const std::vector<double>& xs, const char* what, double lo, double hi, bool hi_closed)
{
    if (xs.empty()) {
        throw DomainError(std::string(what) + " grid is empty");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool inside = xs[i] > lo && (hi_closed ? xs[i] <= hi : xs[i] < hi);
        if (!inside) {
            throw DomainError(std::string(what) + " grid value " + format_double(xs[i]) + " is out of range");
        }
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw DomainError(std::string(what) + " grid must be strictly increasing");
        }
    }
}

enum class Procedure { Bayes0, Bfdr, Fdr };

Procedure parse_procedure(const std::string& name)
{
    if (name == "bayes0") {
        return Procedure::Bayes0;
    }
    if (name == "bfdr") {
        return Procedure::Bfdr;
    }
    if (name == "fdr") {
        return Procedure::Fdr;
    }
    throw DomainError("unknown procedure '" + name + "' (expected bayes0, bfdr or fdr)");
}

// One output row template: a procedure with either a level rule or the
// oracle parameters of Bayes0.
struct Column {
    Procedure procedure;
    std::string name;
    std::string rule_label;
    std::optional<LevelChoice> level;
};

struct Cell {
    std::size_t m_index;
    double beta;
    double power;
};

struct Outcome {
    double alpha = kNa;
    double risk = kNa;
    double bayes_risk = kNa;
    double excess_rel = kNa;
};

} // namespace

int run_grid(const GridOptions& opts, std::ostream& out)
{
    const ResolvedFamily fam = resolve_family(opts.family);
    const std::vector<double> betas = opts.betas.empty() ? default_lattice(opts.grid_size) : opts.betas;
    const std::vector<double> powers = opts.powers.empty() ? default_lattice(opts.grid_size) : opts.powers;
    require_increasing(betas, "beta", 0.0, 1.0, true);
    require_increasing(powers, "C", 0.0, 1.0, false);
    if (opts.m_list.empty()) {
        throw DomainError("--m list is empty");
    }
    for (std::size_t m : opts.m_list) {
        if (m < 2) {
            throw DomainError("grid values of m must be >= 2");
        }
    }
    if (opts.output.empty()) {
        throw DomainError("grid needs --out");
    }
    if (opts.procedures.empty()) {
        throw DomainError("--procedures is empty");
    }

    const std::vector<LevelChoice> levels = resolve_levels(opts.level, LevelChoice::opt_at(0.5, 0.5));
    std::vector<double> oracle = opts.bayes0;
    if (oracle.empty()) {
        oracle = opts.level.alpha_opt.size() == 2 ? opts.level.alpha_opt : std::vector<double>{0.5, 0.5};
    }
    if (oracle.size() != 2 || !(oracle[0] > 0.0 && oracle[0] <= 1.0) || !(oracle[1] > 0.0 && oracle[1] < 1.0)) {
        throw DomainError("--bayes0 takes two values: B0 in (0, 1] and C0 in (0, 1)");
    }

    std::vector<Column> columns;
    for (const std::string& name : opts.procedures) {
        const Procedure p = parse_procedure(name);
        if (p == Procedure::Bayes0) {
            columns.push_back(
                {p, name, "bayes(" + format_double(oracle[0]) + ";" + format_double(oracle[1]) + ")", std::nullopt});
            continue;
        }
        for (const LevelChoice& level : levels) {
            columns.push_back({p, name, level.label(), level});
        }
    }

    // Levels and oracle thresholds depend on m only.
    const std::size_t n_m = opts.m_list.size();
    std::vector<std::vector<double>> alphas(n_m, std::vector<double>(columns.size(), kNa));
    std::vector<double> oracle_threshold(n_m, kNa);
    for (std::size_t mi = 0; mi < n_m; ++mi) {
        const std::size_t m = opts.m_list[mi];
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].level) {
                try {
                    alphas[mi][c] = columns[c].level->resolve(fam.kind, fam.shape, m);
                } catch (const Error&) {
                }
            }
        }
        try {
            oracle_threshold[mi] =
                calibrate(fam.kind, fam.shape, CanonicalParams::from_beta(oracle[0], oracle[1]), m).bayes_threshold();
        } catch (const Error&) {
        }
    }

    std::vector<Cell> cells;
    for (std::size_t mi = 0; mi < n_m; ++mi) {
        for (double b : betas) {
            for (double c : powers) {
                cells.push_back({mi, b, c});
            }
        }
    }
    std::vector<std::vector<Outcome>> results(cells.size(), std::vector<Outcome>(columns.size()));

    auto compute = [&](std::size_t index) {
        const Cell& cell = cells[index];
        const std::size_t m = opts.m_list[cell.m_index];
        std::optional<ModelSpec> model;
        try {
            model = calibrate(fam.kind, fam.shape, CanonicalParams::from_beta(cell.beta, cell.power), m);
        } catch (const Error&) {
            return;
        }
        const double bayes_risk = risk_det(*model, model->bayes_threshold());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            Outcome& o = results[index][c];
            o.bayes_risk = bayes_risk;
            o.alpha = alphas[cell.m_index][c];
            try {
                switch (columns[c].procedure) {
                case Procedure::Bayes0:
                    if (!std::isnan(oracle_threshold[cell.m_index])) {
                        o.risk = risk_det(*model, oracle_threshold[cell.m_index]);
                    }
                    break;
                case Procedure::Bfdr:
                    if (!std::isnan(o.alpha)) {
                        o.risk = risk_det(*model, bfdr_threshold(*model, o.alpha).value);
                    }
                    break;
                case Procedure::Fdr:
                    if (!std::isnan(o.alpha)) {
                        o.risk = exact_fdr_risk(*model, m, o.alpha).risk;
                    }
                    break;
                }
            } catch (const Error&) {
                o.risk = kNa;
            }
            if (!std::isnan(o.risk)) {
                o.excess_rel = excess(o.risk, bayes_risk);
            }
        }
    };

    const unsigned requested = opts.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : opts.threads;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(requested, cells.size()));
    // Cells are handed out from the end: with ascending m the costly ones go first.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1)) {
            compute(cells.size() - 1 - k);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    std::ofstream file(opts.output, std::ios::binary);
    if (!file) {
        throw Error("cannot write " + opts.output);
    }
    file << kRiskCsvHeader << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const Outcome& o = results[i][c];
            write_risk_row(file, {fam.name, fam.shape.zeta(), opts.m_list[cells[i].m_index], cells[i].beta,
                                  cells[i].power, columns[c].name, columns[c].rule_label, o.alpha, o.risk,
                                  o.bayes_risk, o.excess_rel});
        }
    }
    file.flush();
    if (!file) {
        throw Error("cannot write " + opts.output);
    }

    out << "rows: " << cells.size() * columns.size() << '\n';
    out << "m,procedure,alpha_rule,cells,failures,fraction_excess_le_" << format_double(opts.excess_level) << '\n';
    std::size_t total_failures = 0;
    const std::size_t per_m = betas.size() * powers.size();
    for (std::size_t mi = 0; mi < n_m; ++mi) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::size_t hits = 0;
            std::size_t failures = 0;
            for (std::size_t i = mi * per_m; i < (mi + 1) * per_m; ++i) {
                const double e = results[i][c].excess_rel;
                if (std::isnan(e)) {
                    ++failures;
                } else if (e <= opts.excess_level) {
                    ++hits;
                }
            }
            total_failures += failures;
            out << opts.m_list[mi] << ',' << columns[c].name << ',' << columns[c].rule_label << ',' << per_m << ','
                << failures << ',' << format_double(static_cast<double>(hits) / static_cast<double>(per_m)) << '\n';
        }
    }
    out << "failures: " << total_failures << '\n';
    return 0;
}

} // namespace fdrclass::cli
