#include "signalscope/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "signalscope/optimizer.hpp"
#include "signalscope/signaling.hpp"

namespace signalscope::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kOracleAgreement = 1e-6;

constexpr const char* kSweepHeader =
    "kind,s,epsilon,theta_prime,fidelity,optimal_fidelity,entropy_before,"
    "entropy_after,delta,signaling,feasible";

double parse_number(const std::string& text) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (consumed != text.size()) {
        throw std::invalid_argument("trailing characters in number: '" + text + "'");
    }
    return value;
}

std::string trimmed(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t");
    const auto end = text.find_last_not_of(" \t");
    return begin == std::string::npos ? "" : text.substr(begin, end - begin + 1);
}

const char* bool_name(bool value) { return value ? "true" : "false"; }

ordered_json document_head(const char* command, const RunConfig& config) {
    ordered_json doc;
    doc["schema_version"] = "1";
    doc["command"] = command;
    doc["kind"] = to_string(config.kind);
    return doc;
}

std::string finish_json(const ordered_json& doc) { return doc.dump(2) + "\n"; }

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

}  // namespace

std::vector<double> parse_grid(const std::string& raw) {
    const std::string text = trimmed(raw);
    require(!text.empty(), "empty grid argument");

    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream stream(text);
        std::string part;
        while (std::getline(stream, part, ':')) {
            parts.push_back(trimmed(part));
        }
        require(parts.size() == 3, "range form is start:stop:step");
        const double start = parse_number(parts[0]);
        const double stop = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        require(step > 0.0, "range step must be positive");
        require(stop >= start - 1e-12, "range stop must not precede start");
        // The +1e-9 absorbs binary representation error so an on-grid stop
        // value is included (e.g. 0.1:0.9:0.1 yields nine points).
        const auto count =
            static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long k = 0; k < count; ++k) {
            values.push_back(start + static_cast<double>(k) * step);
        }
    } else if (text.find(',') != std::string::npos) {
        std::stringstream stream(text);
        std::string part;
        while (std::getline(stream, part, ',')) {
            values.push_back(parse_number(trimmed(part)));
        }
        for (std::size_t i = 1; i < values.size(); ++i) {
            require(values[i] > values[i - 1], "grid list must be strictly ascending");
        }
    } else {
        values.push_back(parse_number(text));
    }
    return values;
}

std::string format_real(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (x == 0.0) {
        return "0";
    }
    char buffer[40];
    if (std::abs(x) < 1e-4) {
        std::snprintf(buffer, sizeof buffer, "%.11e", x);
    } else {
        std::snprintf(buffer, sizeof buffer, "%.12g", x);
    }
    return buffer;
}

MachineKind parse_kind(const std::string& name) {
    if (name == "clone") {
        return MachineKind::Clone;
    }
    if (name == "delete") {
        return MachineKind::Delete;
    }
    throw std::invalid_argument("kind must be 'clone' or 'delete'");
}

CommandResult cmd_detect(const RunConfig& config) {
    require(config.overlaps.size() == 1, "detect needs exactly one overlap");
    const double s = config.overlaps.front();
    require(s >= 0.0 && s <= 1.0, "overlap must lie in [0, 1]");

    double epsilon = 0.0;
    if (config.epsilon_max) {
        epsilon = 1.0 - optimal_fidelity_for_overlap(s, config.kind);
    } else {
        require(config.epsilons.size() == 1, "detect needs exactly one epsilon");
        epsilon = config.epsilons.front();
        require(epsilon >= 0.0, "epsilon must be nonnegative");
    }

    const std::vector<SweepRecord> records =
        sweep(config.kind, {s}, {epsilon}, config.threshold);
    const SweepRecord& record = records.front();
    require(record.feasible, "epsilon exceeds 1 - optimal_fidelity for this overlap");

    const double overlap_before = config.kind == MachineKind::Clone ? s : s * s;
    const double overlap_after = std::cos(2.0 * record.theta_prime);

    std::string document;
    if (config.format == OutputFormat::Json) {
        ordered_json doc = document_head("detect", config);
        doc["s"] = record.s;
        doc["epsilon"] = record.epsilon;
        doc["theta_prime"] = record.theta_prime;
        doc["machine_fidelity"] = record.fidelity;
        doc["optimal_fidelity"] = record.optimal_fidelity;
        doc["overlap_before"] = overlap_before;
        doc["overlap_after"] = overlap_after;
        doc["entropy_before_bits"] = record.entropy_before;
        doc["entropy_after_bits"] = record.entropy_after;
        doc["delta_bits"] = record.delta;
        doc["threshold_bits"] = config.threshold;
        doc["signaling"] = record.signaling;
        document = finish_json(doc);
    } else {
        std::ostringstream out;
        out << kSweepHeader << '\n'
            << to_string(config.kind) << ',' << format_real(record.s) << ','
            << format_real(record.epsilon) << ',' << format_real(record.theta_prime)
            << ',' << format_real(record.fidelity) << ','
            << format_real(record.optimal_fidelity) << ','
            << format_real(record.entropy_before) << ','
            << format_real(record.entropy_after) << ',' << format_real(record.delta)
            << ',' << bool_name(record.signaling) << ','
            << bool_name(record.feasible) << '\n';
        document = out.str();
    }
    return CommandResult{record.signaling ? 2 : 0, std::move(document)};
}

CommandResult cmd_sweep(const RunConfig& config) {
    require(!config.overlaps.empty(), "sweep needs an overlap grid");
    require(!config.epsilons.empty(), "sweep needs an epsilon grid");
    const std::vector<SweepRecord> records =
        sweep(config.kind, config.overlaps, config.epsilons, config.threshold);

    std::string document;
    if (config.format == OutputFormat::Csv) {
        std::ostringstream out;
        out << kSweepHeader << '\n';
        for (const SweepRecord& record : records) {
            out << to_string(config.kind) << ',' << format_real(record.s) << ','
                << format_real(record.epsilon) << ','
                << format_real(record.theta_prime) << ','
                << format_real(record.fidelity) << ','
                << format_real(record.optimal_fidelity) << ','
                << format_real(record.entropy_before) << ','
                << format_real(record.entropy_after) << ','
                << format_real(record.delta) << ',' << bool_name(record.signaling)
                << ',' << bool_name(record.feasible) << '\n';
        }
        document = out.str();
    } else {
        ordered_json doc = document_head("sweep", config);
        doc["threshold_bits"] = config.threshold;
        doc["seed"] = config.seed;
        doc["records"] = ordered_json::array();
        for (const SweepRecord& record : records) {
            ordered_json row;
            row["s"] = record.s;
            row["epsilon"] = record.epsilon;
            row["theta_prime"] = record.theta_prime;
            row["fidelity"] = record.fidelity;
            row["optimal_fidelity"] = record.optimal_fidelity;
            row["entropy_before_bits"] = record.entropy_before;
            row["entropy_after_bits"] = record.entropy_after;
            row["delta_bits"] = record.delta;
            row["signaling"] = record.signaling;
            row["feasible"] = record.feasible;
            doc["records"].push_back(std::move(row));
        }
        document = finish_json(doc);
    }
    return CommandResult{0, std::move(document)};
}

CommandResult cmd_oracle(const RunConfig& config) {
    require(!config.overlaps.empty(), "oracle needs an overlap grid");
    const SearchConfig search{config.restarts, config.max_iterations, 1e-10,
                              config.seed};
    const PureState blank = PureState::basis(2, 0);

    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "kind,s,cone_fidelity,gram_fidelity,unitary_fidelity,max_discrepancy\n";
    double worst = 0.0;
    bool all_converged = true;

    for (double s : config.overlaps) {
        require(s >= 0.0 && s <= 1.0, "overlap must lie in [0, 1]");
        const StatePair pair = qubit_pair_from_overlap(s);
        StatePair doubled(tensor(pair.psi, pair.psi), tensor(pair.phi, pair.phi));
        StatePair blanked(tensor(pair.psi, blank), tensor(pair.phi, blank));
        const StatePair& inputs =
            config.kind == MachineKind::Clone ? blanked : doubled;
        const StatePair& targets =
            config.kind == MachineKind::Clone ? doubled : blanked;

        const double cone = optimal_fidelity_for_overlap(s, config.kind);
        const double gram =
            gram_constrained_max(targets, inputs.overlap, search).fidelity;
        double unitary = 0.0;
        bool converged = true;
        try {
            unitary = unitary_search(inputs, targets, 4, search);
        } catch (const SearchFailure& failure) {
            unitary = failure.best_found;
            converged = false;
        }

        const double discrepancy =
            std::max({std::abs(cone - gram), std::abs(cone - unitary),
                      std::abs(gram - unitary)});
        worst = std::max(worst, discrepancy);
        all_converged = all_converged && converged;

        ordered_json row;
        row["s"] = s;
        row["cone_fidelity"] = cone;
        row["gram_fidelity"] = gram;
        row["unitary_fidelity"] = unitary;
        row["max_discrepancy"] = discrepancy;
        row["converged"] = converged;
        rows.push_back(std::move(row));

        csv << to_string(config.kind) << ',' << format_real(s) << ','
            << format_real(cone) << ',' << format_real(gram) << ','
            << format_real(unitary) << ',' << format_real(discrepancy) << '\n';
    }

    const bool agreement = all_converged && worst < kOracleAgreement;
    std::string document;
    if (config.format == OutputFormat::Json) {
        ordered_json doc = document_head("oracle", config);
        doc["seed"] = config.seed;
        doc["restarts"] = config.restarts;
        doc["rows"] = std::move(rows);
        doc["max_discrepancy"] = worst;
        doc["agreement"] = agreement;
        document = finish_json(doc);
    } else {
        document = csv.str();
    }
    return CommandResult{agreement ? 0 : 1, std::move(document)};
}

CommandResult cmd_plan(const RunConfig& config) {
    require(config.overlaps.size() == 1, "plan needs exactly one overlap");
    const double s = config.overlaps.front();
    require(s >= 0.0 && s <= 1.0, "overlap must lie in [0, 1]");

    const ExperimentPlan plan =
        plan_experiment(qubit_pair_from_overlap(s), config.kind);

    std::string document;
    if (config.format == OutputFormat::Json) {
        ordered_json doc = document_head("plan", config);
        doc["s"] = s;
        doc["schmidt_a2"] = plan.schmidt_a2;
        doc["target_entropy_bits"] = plan.target_entropy;
        doc["filter_success_probability"] = plan.filter_success_probability;
        document = finish_json(doc);
    } else {
        std::ostringstream out;
        out << "kind,s,schmidt_a2,target_entropy,filter_success_probability\n"
            << to_string(config.kind) << ',' << format_real(s) << ','
            << format_real(plan.schmidt_a2) << ','
            << format_real(plan.target_entropy) << ','
            << format_real(plan.filter_success_probability) << '\n';
        document = out.str();
    }
    return CommandResult{0, std::move(document)};
}

}  // namespace signalscope::cli
