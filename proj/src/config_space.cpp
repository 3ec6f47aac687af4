#include "aben/config_space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace aben {

namespace {

const char* const kSubsetNames[] = {"remove_nothing", "outlier_prune"};
const char* const kWeightingNames[] = {"uniform", "genetic",  "gain_rank", "relief",
                                       "pca",     "cfs",      "cns",       "wrapper"};
const char* const kDiscretizationNames[] = {"no_discretization", "equal_frequency",
                                            "equal_width"};
const char* const kSimilarityNames[] = {"euclidean",        "weighted_euclidean",
                                        "max_measure",      "triangular_local",
                                        "minkowski",        "feature_rank_mean"};
const char* const kAdaptationNames[] = {"median", "mean", "second_learner", "weighted_mean"};
const char* const kAnalogyNames[] = {"k1", "k2", "k3", "k4", "k5", "dynamic_k"};

std::size_t analogies_slot(const Configuration& c) {
    return c.dynamic_k() ? 5 : c.k - 1;
}

}  // namespace

std::string Configuration::to_string() const {
    std::string out;
    out += kSubsetNames[static_cast<std::size_t>(subset)];
    out += '|';
    out += kWeightingNames[static_cast<std::size_t>(weighting)];
    out += '|';
    out += kDiscretizationNames[static_cast<std::size_t>(discretization)];
    out += '|';
    out += kSimilarityNames[static_cast<std::size_t>(similarity)];
    if (similarity == SimilarityMeasure::Minkowski) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "(p=%.3f)", minkowski_p);
        out += buf;
    }
    out += '|';
    out += kAdaptationNames[static_cast<std::size_t>(adaptation)];
    out += '|';
    out += kAnalogyNames[analogies_slot(*this)];
    return out;
}

Configuration abe0_configuration() {
    Configuration c;
    c.subset = SubsetPolicy::RemoveNothing;
    c.weighting = WeightingScheme::Uniform;
    c.discretization = DiscretizePolicy::None;
    c.similarity = SimilarityMeasure::WeightedEuclidean;
    c.adaptation = AdaptationStrategy::Median;
    c.k = 1;
    return c;
}

bool scheme_needs_classes(WeightingScheme scheme) {
    switch (scheme) {
        case WeightingScheme::Genetic:
        case WeightingScheme::GainRank:
        case WeightingScheme::Relief:
        case WeightingScheme::Cfs:
        case WeightingScheme::Cns:
        case WeightingScheme::Wrapper:
            return true;
        case WeightingScheme::Uniform:
        case WeightingScheme::Pca:
            return false;
    }
    return false;
}

std::size_t FeatureModel::axis_index(const std::string& name) const {
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (axes[i].name == name) return i;
    }
    throw AbenError("unknown axis: " + name);
}

std::size_t FeatureModel::owning_axis(const std::string& leaf) const {
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (std::find(axes[i].leaves.begin(), axes[i].leaves.end(), leaf) !=
            axes[i].leaves.end()) {
            return i;
        }
    }
    throw DanglingConstraint("constraint names unknown leaf: " + leaf);
}

bool FeatureModel::selection_satisfies(const std::vector<std::size_t>& choice) const {
    auto selected = [&](const std::string& leaf) {
        const std::size_t axis = owning_axis(leaf);
        return axes[axis].leaves[choice[axis]] == leaf;
    };
    for (const auto& c : constraints) {
        if (c.kind == ConstraintKind::Requires) {
            if (selected(c.a) && !selected(c.b)) return false;
        } else {
            if (selected(c.a) && selected(c.b)) return false;
        }
    }
    return true;
}

FeatureModel default_feature_model() {
    FeatureModel m;
    m.root = "aben";
    m.axes = {
        {"subset_selection", true,
         {std::begin(kSubsetNames), std::end(kSubsetNames)}},
        {"feature_weighting", false,
         {std::begin(kWeightingNames), std::end(kWeightingNames)}},
        {"discretization", false,
         {std::begin(kDiscretizationNames), std::end(kDiscretizationNames)}},
        {"similarity", true,
         {std::begin(kSimilarityNames), std::end(kSimilarityNames)}},
        {"adaptation", true,
         {std::begin(kAdaptationNames), std::end(kAdaptationNames)}},
        {"analogy_selection", true,
         {std::begin(kAnalogyNames), std::end(kAnalogyNames)}},
    };
    using CK = FeatureModel::ConstraintKind;
    m.constraints = {
        {CK::Requires, "uniform", "no_discretization"},
        {CK::Excludes, "genetic", "no_discretization"},
        {CK::Excludes, "gain_rank", "no_discretization"},
        {CK::Excludes, "relief", "no_discretization"},
        {CK::Excludes, "cfs", "no_discretization"},
        {CK::Excludes, "cns", "no_discretization"},
        {CK::Excludes, "wrapper", "no_discretization"},
        // At k=1 every adaptation strategy collapses to the same answer;
        // only the median form is kept as canonical.
        {CK::Excludes, "k1", "mean"},
        {CK::Excludes, "k1", "second_learner"},
        {CK::Excludes, "k1", "weighted_mean"},
    };
    return m;
}

namespace {

std::size_t indent_of(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && line[i] == ' ') ++i;
    return i;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::stringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace

FeatureModel parse_feature_model(const std::string& text) {
    FeatureModel m;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    std::set<std::string> seen_names;
    FeatureModel::Axis* current_axis = nullptr;
    bool in_one_of = false;
    std::size_t leaf_indent = 0;

    while (std::getline(ss, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const std::size_t indent = indent_of(line);
        const auto toks = tokens_of(line);
        const auto fail = [&](const std::string& why) -> ParseError {
            return ParseError("line " + std::to_string(line_no) + ", column " +
                              std::to_string(indent + 1) + ": " + why);
        };

        if (toks[0] == "feature") {
            if (toks.size() < 2 ||
                (toks.size() >= 3 && toks[2] != "mandatory" && toks[2] != "optional")) {
                throw fail("expected 'feature <name> [mandatory|optional]'");
            }
            if (!seen_names.insert(toks[1]).second) {
                throw MultipleParents("feature '" + toks[1] + "' declared twice");
            }
            if (indent == 0) {
                if (!m.root.empty()) throw fail("multiple root features");
                m.root = toks[1];
                current_axis = nullptr;
            } else {
                if (m.root.empty()) throw fail("axis before root feature");
                m.axes.push_back({toks[1], toks.size() < 3 || toks[2] == "mandatory", {}});
                current_axis = &m.axes.back();
            }
            in_one_of = false;
        } else if (toks[0] == "one-of:") {
            if (current_axis == nullptr) throw fail("'one-of:' outside a feature");
            in_one_of = true;
            leaf_indent = indent + 2;
        } else if (toks[0] == "requires" || toks[0] == "excludes") {
            if (toks.size() != 3) throw fail("expected '" + toks[0] + " <a> <b>'");
            m.constraints.push_back({toks[0] == "requires"
                                         ? FeatureModel::ConstraintKind::Requires
                                         : FeatureModel::ConstraintKind::Excludes,
                                     toks[1], toks[2]});
        } else {
            if (!in_one_of || current_axis == nullptr || indent < leaf_indent) {
                throw fail("unexpected token '" + toks[0] + "'");
            }
            if (toks.size() != 1) throw fail("one leaf per line");
            if (!seen_names.insert(toks[0]).second) {
                throw MultipleParents("leaf '" + toks[0] + "' has multiple parents");
            }
            current_axis->leaves.push_back(toks[0]);
        }
    }
    if (m.root.empty() || m.axes.empty()) throw ParseError("model has no features");
    for (const auto& axis : m.axes) {
        if (axis.leaves.empty()) throw ParseError("axis '" + axis.name + "' has no leaves");
    }
    for (const auto& c : m.constraints) {
        m.owning_axis(c.a);  // throws DanglingConstraint on unknown leaves
        m.owning_axis(c.b);
    }
    return m;
}

std::string serialize_feature_model(const FeatureModel& model) {
    std::string out = "feature " + model.root + " mandatory\n";
    for (const auto& axis : model.axes) {
        out += "  feature " + axis.name + (axis.mandatory ? " mandatory\n" : " optional\n");
        out += "    one-of:\n";
        for (const auto& leaf : axis.leaves) out += "      " + leaf + "\n";
    }
    for (const auto& c : model.constraints) {
        out += (c.kind == FeatureModel::ConstraintKind::Requires ? "requires " : "excludes ");
        out += c.a + " " + c.b + "\n";
    }
    return out;
}

std::uint64_t enumerate_size(const FeatureModel& model, bool respect_constraints) {
    std::uint64_t raw = 1;
    for (const auto& axis : model.axes) raw *= axis.leaves.size();
    if (!respect_constraints) return raw;

    std::uint64_t valid = 0;
    std::vector<std::size_t> choice(model.axes.size(), 0);
    for (std::uint64_t code = 0; code < raw; ++code) {
        std::uint64_t rest = code;
        for (std::size_t a = 0; a < model.axes.size(); ++a) {
            choice[a] = rest % model.axes[a].leaves.size();
            rest /= model.axes[a].leaves.size();
        }
        if (model.selection_satisfies(choice)) ++valid;
    }
    return valid;
}

Configuration configuration_from_choice(const FeatureModel& model,
                                        const std::vector<std::size_t>& choice) {
    Configuration c;
    bool mapped[6] = {};
    for (std::size_t a = 0; a < model.axes.size(); ++a) {
        const std::string& leaf = model.axes[a].leaves[choice[a]];
        const auto match = [&](const char* const* names, std::size_t n,
                               std::size_t* out) {
            for (std::size_t i = 0; i < n; ++i) {
                if (leaf == names[i]) {
                    *out = i;
                    return true;
                }
            }
            return false;
        };
        std::size_t idx = 0;
        if (match(kSubsetNames, 2, &idx)) {
            c.subset = static_cast<SubsetPolicy>(idx);
            mapped[0] = true;
        } else if (match(kWeightingNames, 8, &idx)) {
            c.weighting = static_cast<WeightingScheme>(idx);
            mapped[1] = true;
        } else if (match(kDiscretizationNames, 3, &idx)) {
            c.discretization = static_cast<DiscretizePolicy>(idx);
            mapped[2] = true;
        } else if (match(kSimilarityNames, 6, &idx)) {
            c.similarity = static_cast<SimilarityMeasure>(idx);
            mapped[3] = true;
        } else if (match(kAdaptationNames, 4, &idx)) {
            c.adaptation = static_cast<AdaptationStrategy>(idx);
            mapped[4] = true;
        } else if (match(kAnalogyNames, 6, &idx)) {
            c.k = idx == 5 ? 0 : idx + 1;
            mapped[5] = true;
        } else {
            throw AbenError("leaf '" + leaf + "' is not an estimator option");
        }
    }
    for (bool axis_done : mapped) {
        if (!axis_done) throw AbenError("model is missing an estimator axis");
    }
    return canonicalize(c);
}

Configuration sample_valid(const FeatureModel& model, Rng& rng) {
    std::vector<std::size_t> choice(model.axes.size());
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (std::size_t a = 0; a < model.axes.size(); ++a) {
            choice[a] = static_cast<std::size_t>(rng.below(model.axes[a].leaves.size()));
        }
        if (model.selection_satisfies(choice)) {
            return configuration_from_choice(model, choice);
        }
    }
    throw NoValidConfiguration("rejection sampling found no valid configuration");
}

Configuration sample_valid(const FeatureModel& model, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    return sample_valid(model, rng);
}

bool is_valid(const Configuration& config) {
    if (config.k > 5) return false;
    if (scheme_needs_classes(config.weighting) &&
        config.discretization == DiscretizePolicy::None) {
        return false;
    }
    if (config.weighting == WeightingScheme::Uniform &&
        config.discretization != DiscretizePolicy::None) {
        return false;
    }
    if (config.k == 1 && config.adaptation != AdaptationStrategy::Median) return false;
    if (config.similarity == SimilarityMeasure::Minkowski &&
        (config.minkowski_p < kMinkowskiMinP || config.minkowski_p > kMinkowskiMaxP)) {
        return false;
    }
    return true;
}

Configuration canonicalize(Configuration config) {
    if (config.weighting == WeightingScheme::Uniform) {
        config.discretization = DiscretizePolicy::None;
    }
    if (config.k == 1) config.adaptation = AdaptationStrategy::Median;
    if (config.similarity == SimilarityMeasure::Minkowski) {
        config.minkowski_p = std::clamp(config.minkowski_p, kMinkowskiMinP, kMinkowskiMaxP);
    } else {
        config.minkowski_p = kMinkowskiDefaultP;
    }
    return config;
}

std::vector<std::string> configuration_axis_names() {
    return {"subset", "weighting", "discretization", "similarity", "adaptation", "analogies"};
}

std::vector<std::string> configuration_axis_values(const Configuration& config) {
    return {kSubsetNames[static_cast<std::size_t>(config.subset)],
            kWeightingNames[static_cast<std::size_t>(config.weighting)],
            kDiscretizationNames[static_cast<std::size_t>(config.discretization)],
            kSimilarityNames[static_cast<std::size_t>(config.similarity)],
            kAdaptationNames[static_cast<std::size_t>(config.adaptation)],
            kAnalogyNames[analogies_slot(config)]};
}

DecisionVector encode(const Configuration& config) {
    DecisionVector v;
    v.subset = static_cast<std::size_t>(config.subset);
    v.weighting = static_cast<std::size_t>(config.weighting);
    v.discretization = static_cast<std::size_t>(config.discretization);
    v.similarity = static_cast<std::size_t>(config.similarity);
    v.minkowski_p = config.minkowski_p;
    v.adaptation = static_cast<std::size_t>(config.adaptation);
    v.analogies = analogies_slot(config);
    return v;
}

Configuration decode(const DecisionVector& vec) {
    const std::size_t slots[] = {vec.subset,     vec.weighting,  vec.discretization,
                                 vec.similarity, 0,              vec.adaptation,
                                 vec.analogies};
    for (std::size_t i = 0; i < DecisionVector::kSlotCount; ++i) {
        if (i == DecisionVector::kContinuousSlot) continue;
        if (slots[i] >= DecisionVector::kCardinalities[i]) {
            throw InvalidSlotIndex("slot " + std::to_string(i) + " index out of range");
        }
    }
    Configuration c;
    c.subset = static_cast<SubsetPolicy>(vec.subset);
    c.weighting = static_cast<WeightingScheme>(vec.weighting);
    c.discretization = static_cast<DiscretizePolicy>(vec.discretization);
    c.similarity = static_cast<SimilarityMeasure>(vec.similarity);
    c.minkowski_p = std::clamp(vec.minkowski_p, kMinkowskiMinP, kMinkowskiMaxP);
    c.adaptation = static_cast<AdaptationStrategy>(vec.adaptation);
    c.k = vec.analogies == 5 ? 0 : vec.analogies + 1;
    return canonicalize(c);
}

}  // namespace aben
