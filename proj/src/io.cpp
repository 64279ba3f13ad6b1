#include "seqpomdp/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace seqpomdp {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_fields(const json& j, const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
    for (const auto& [key, _] : j.items()) {
        if (!required.count(key) && !optional.count(key))
            throw ParseError("unknown field \"" + key + "\" in model file");
    }
    for (const auto& key : required)
        if (!j.contains(key)) throw ParseError("missing field \"" + key + "\" in model file");
}

std::vector<double> as_vector(const json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("field \"" + name + "\" must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ParseError("field \"" + name + "\" must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> as_matrix(const json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("field \"" + name + "\" must be an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_vector(j[i], name + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace

ModelSpec parse_model_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("model file must be a JSON object");
    if (!j.contains("type") || !j["type"].is_string())
        throw ParseError("model file needs a string \"type\" field");
    std::string type = j["type"].get<std::string>();

    if (type == "general") {
        require_fields(j, {"type", "states", "prior", "basis", "zeta", "rewards", "beta"});
        ModelSpec spec;
        if (!j["states"].is_array()) throw ParseError("field \"states\" must be an array");
        for (const auto& s : j["states"]) {
            if (s.is_string())
                spec.states.push_back(s.get<std::string>());
            else if (s.is_number_integer())
                spec.states.push_back(std::to_string(s.get<long long>()));
            else
                throw ParseError("state labels must be strings or integers");
        }
        spec.prior = as_vector(j["prior"], "prior");
        spec.basis = as_matrix(j["basis"], "basis");
        spec.exponents = as_matrix(j["zeta"], "zeta");
        spec.rewards = as_vector(j["rewards"], "rewards");
        if (!j["beta"].is_number()) throw ParseError("field \"beta\" must be a number");
        spec.discount = j["beta"].get<double>();
        return spec;
    }

    if (type == "noisy_or") {
        require_fields(j, {"type", "n_features", "baselines", "zeta", "rewards", "beta",
                           "prior_mode"});
        NoisyOrSpec no;
        if (!j["n_features"].is_number_integer())
            throw ParseError("field \"n_features\" must be an integer");
        no.n_features = j["n_features"].get<int>();
        no.baselines = as_vector(j["baselines"], "baselines");
        no.exponents = as_matrix(j["zeta"], "zeta");
        no.rewards = as_vector(j["rewards"], "rewards");
        if (!j["beta"].is_number()) throw ParseError("field \"beta\" must be a number");
        no.discount = j["beta"].get<double>();
        const auto& pm = j["prior_mode"];
        if (pm.is_string()) {
            if (pm.get<std::string>() != "uniform")
                throw ParseError("prior_mode must be \"uniform\" or an array of probabilities");
        } else {
            no.prior = as_vector(pm, "prior_mode");
        }
        try {
            return build_noisy_or(no);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }

    throw ParseError("unknown model type \"" + type + "\" (expected general or noisy_or)");
}

ModelSpec load_model_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_spec(buf.str());
}

std::string hash_hex(std::uint64_t hash) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void save_solution(const Solution& solution, std::ostream& out) {
    out << "seqpomdp-tables v1\n";
    out << "model_hash " << hash_hex(solution.model_hash) << "\n";
    out << "epsilon " << fmt17(solution.epsilon) << "\n";
    out << "spacing " << fmt17(solution.spacing) << "\n";
    out << "horizon " << solution.horizon << "\n";
    out << "dims " << (solution.stages.empty() ? 0 : solution.stages[0].dims()) << "\n";
    for (const auto& stage : solution.stages) {
        out << "stage " << stage.stage() << " extent " << fmt17(stage.extent()) << " per_dim "
            << stage.per_dim() << " count " << stage.size() << "\n";
        for (std::uint64_t off = 0; off < stage.size(); ++off)
            out << fmt17(stage.value_at_offset(off)) << " " << stage.policy_at_offset(off) << "\n";
    }
    out << "end\n";
}

void save_solution_file(const Solution& solution, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write artifact file: " + path);
    save_solution(solution, out);
}

Solution load_solution(std::istream& in, const Model& model) {
    auto bad = [](const std::string& msg) -> IntegrityError {
        return IntegrityError("artifact file: " + msg);
    };

    std::string line, word;
    if (!std::getline(in, line) || line != "seqpomdp-tables v1")
        throw bad("bad or missing version header");

    Solution sol;
    std::string hash_str;
    int dims = -1;
    {
        std::string key;
        in >> key >> hash_str;
        if (key != "model_hash") throw bad("expected model_hash");
        in >> key >> sol.epsilon;
        if (key != "epsilon") throw bad("expected epsilon");
        in >> key >> sol.spacing;
        if (key != "spacing") throw bad("expected spacing");
        in >> key >> sol.horizon;
        if (key != "horizon") throw bad("expected horizon");
        in >> key >> dims;
        if (key != "dims") throw bad("expected dims");
        if (!in) throw bad("truncated header");
    }
    if (hash_str != hash_hex(model.hash()))
        throw bad("model hash mismatch: artifact was computed from a different model");
    if (dims != model.basis_size()) throw bad("dimension mismatch");

    for (int t = 0; t <= sol.horizon; ++t) {
        std::string key;
        int stage_idx;
        double extent;
        std::int64_t per_dim;
        std::uint64_t count;
        in >> key >> stage_idx;
        if (!in || key != "stage" || stage_idx != t) throw bad("expected stage " + std::to_string(t));
        in >> key >> extent;
        if (key != "extent") throw bad("expected extent");
        in >> key >> per_dim;
        if (key != "per_dim") throw bad("expected per_dim");
        in >> key >> count;
        if (!in || key != "count") throw bad("expected count");

        StageTable table(t, dims, sol.spacing, extent);
        if (table.per_dim() != per_dim || table.size() != count)
            throw bad("stage " + std::to_string(t) + " shape does not match its extent");
        for (std::uint64_t off = 0; off < count; ++off) {
            double v;
            int p;
            in >> v >> p;
            if (!in) throw bad("truncated values in stage " + std::to_string(t));
            table.set(off, v, p);
        }
        sol.stages.push_back(std::move(table));
    }
    in >> word;
    if (word != "end") throw bad("missing end marker");

    sol.model_hash = model.hash();
    sol.bounds = bounds_report(model, sol.epsilon, sol.spacing, sol.horizon);
    return sol;
}

Solution load_solution_file(const std::string& path, const Model& model) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read artifact file: " + path);
    return load_solution(in, model);
}

}  // namespace seqpomdp
