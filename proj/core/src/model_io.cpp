#include "parsvm/model_io.hpp"

#include "parsvm/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <iterator>
#include <sstream>

namespace parsvm {

using nlohmann::json;

namespace {

json encode_binary(const binary_model &m) {
    json sv = json::array();
    for (std::size_t s = 0; s < m.num_support(); ++s) {
        const auto row = m.support_vector(s);
        sv.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return json{
        { "c", m.c },
        { "bias", m.bias },
        { "weights", m.weights },
        { "support_vectors", std::move(sv) },
        { "iterations", m.info.iterations },
        { "converged", m.info.converged },
        { "gap", m.info.gap },
        { "dual_objective", m.info.dual_objective },
    };
}

binary_model decode_binary(const json &j, const kernel_spec &kernel, std::size_t d) {
    binary_model m;
    m.kernel = kernel;
    m.num_features = d;
    m.c = j.at("c").get<double>();
    m.bias = j.at("bias").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
    const auto &sv = j.at("support_vectors");
    if (sv.size() != m.weights.size()) {
        throw parse_error{ "model file: support vector count does not match weight count" };
    }
    for (const auto &row : sv) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != d) {
            throw parse_error{ "model file: support vector of dimension " + std::to_string(values.size()) +
                               ", expected " + std::to_string(d) };
        }
        m.support_vectors.insert(m.support_vectors.end(), values.begin(), values.end());
    }
    m.info.iterations = j.at("iterations").get<std::size_t>();
    m.info.converged = j.at("converged").get<bool>();
    m.info.gap = j.at("gap").get<double>();
    m.info.dual_objective = j.at("dual_objective").get<double>();
    return m;
}

int read_version(const json &j) {
    const auto &v = j.at("format_version");
    if (v.is_number_integer()) {
        return v.get<int>();
    }
    if (v.is_string()) {
        try {
            return std::stoi(v.get<std::string>());
        } catch (const std::exception &) {
            throw parse_error{ "model file: format_version is not an integer" };
        }
    }
    throw parse_error{ "model file: format_version is not an integer" };
}

}  // namespace

std::string to_json_string(const model_file &file) {
    json pairs = json::array();
    const auto enumerated = enumerate_pairs(file.model.num_classes);
    for (std::size_t j = 0; j < enumerated.size(); ++j) {
        json entry = encode_binary(file.model.models.at(j));
        entry["first"] = enumerated[j].first;
        entry["second"] = enumerated[j].second;
        pairs.push_back(std::move(entry));
    }
    json doc{
        { "format_version", file.version },
        { "solver", std::string(to_string(file.model.solver)) },
        { "kernel", { { "kind", std::string(to_string(file.kernel.kind)) }, { "gamma", file.kernel.gamma } } },
        { "num_classes", file.model.num_classes },
        { "num_features", file.model.num_features },
        { "class_values", file.class_values },
        { "pairs", std::move(pairs) },
    };
    if (file.normalization) {
        doc["normalization"] = { { "mean", file.normalization->mean }, { "stddev", file.normalization->stddev } };
    } else {
        doc["normalization"] = nullptr;
    }
    return doc.dump(1) + "\n";
}

model_file from_json_string(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw parse_error{ "model file: malformed JSON at byte offset " + std::to_string(e.byte) };
    }
    try {
        model_file file;
        file.version = read_version(doc);
        if (file.version != model_format_version) {
            throw unsupported_version_error{ "model file: unsupported format version " + std::to_string(file.version) +
                                             " (this build reads version " + std::to_string(model_format_version) +
                                             ")" };
        }
        const auto &k = doc.at("kernel");
        file.kernel.kind = parse_kernel_kind(k.at("kind").get<std::string>());
        file.kernel.gamma = k.at("gamma").get<double>();
        file.class_values = doc.at("class_values").get<std::vector<double>>();
        if (!doc.at("normalization").is_null()) {
            normalization_stats stats;
            stats.mean = doc["normalization"].at("mean").get<std::vector<double>>();
            stats.stddev = doc["normalization"].at("stddev").get<std::vector<double>>();
            file.normalization = std::move(stats);
        }

        auto &model = file.model;
        model.solver = parse_solver_id(doc.at("solver").get<std::string>());
        model.num_classes = doc.at("num_classes").get<std::size_t>();
        model.num_features = doc.at("num_features").get<std::size_t>();
        if (file.class_values.size() != model.num_classes) {
            throw parse_error{ "model file: class_values has " + std::to_string(file.class_values.size()) +
                               " entries, expected " + std::to_string(model.num_classes) };
        }
        if (file.normalization && (file.normalization->mean.size() != model.num_features ||
                                   file.normalization->stddev.size() != model.num_features)) {
            throw parse_error{ "model file: normalization statistics do not match num_features" };
        }
        const auto enumerated = enumerate_pairs(model.num_classes);
        const auto &pairs = doc.at("pairs");
        if (pairs.size() != enumerated.size()) {
            throw parse_error{ "model file: expected " + std::to_string(enumerated.size()) + " pair models, found " +
                               std::to_string(pairs.size()) };
        }
        for (std::size_t j = 0; j < enumerated.size(); ++j) {
            const class_pair stored{ pairs[j].at("first").get<int>(), pairs[j].at("second").get<int>() };
            if (stored != enumerated[j]) {
                throw parse_error{ "model file: pair entries are not in canonical order" };
            }
            model.models.push_back(decode_binary(pairs[j], file.kernel, model.num_features));
        }
        model.job_seconds.assign(enumerated.size(), 0.0);
        return file;
    } catch (const json::exception &e) {
        throw parse_error{ std::string{ "model file: " } + e.what() };
    } catch (const precondition_error &e) {
        throw parse_error{ std::string{ "model file: " } + e.what() };
    }
}

void save_model(const std::filesystem::path &path, const model_file &file) {
    std::ofstream out{ path, std::ios::binary };
    if (!out) {
        throw error{ "cannot write " + path.string() };
    }
    out << to_json_string(file);
    if (!out) {
        throw error{ "failed writing " + path.string() };
    }
}

model_file load_model(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    if (!in) {
        throw error{ "cannot open " + path.string() };
    }
    const std::string text{ std::istreambuf_iterator<char>{ in }, std::istreambuf_iterator<char>{} };
    return from_json_string(text);
}

}  // namespace parsvm
