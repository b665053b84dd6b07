#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "equichow/presentation.hpp"

namespace equichow {

// Key/value store of every input presentation and reference value. Defaults
// are built in; a fixture file overrides individual keys.
class Fixtures {
public:
    static Fixtures defaults();
    // `key = value` lines, '#' comments. Unknown keys are a ParseError.
    static Fixtures parse(const std::string& text);
    static Fixtures load(const std::string& path);

    const std::string& get(const std::string& key) const;
    void set(const std::string& key, std::string value);
    const std::map<std::string, std::string>& values() const { return values_; }
    std::string render() const;

private:
    std::map<std::string, std::string> values_;
};

enum class Verdict { Match, Mismatch, Informational };
const char* verdict_name(Verdict v);

struct StepReport {
    std::string name;
    Verdict verdict = Verdict::Informational;
    std::string computed;
    std::string expected;
    std::string origin;  // "reference", "independent", or empty
    std::vector<std::string> notes;
    double seconds = 0;
};

struct PipelineReport {
    std::vector<StepReport> steps;
    unsigned degree_bound = 0;
    bool overall_match() const;
    const StepReport* find(const std::string& name) const;
};

struct PipelineOptions {
    static constexpr std::uint64_t default_seed = 20240917;
    unsigned degree_bound = 8;
    unsigned oracle_trials = 20;
    std::uint64_t seed = default_seed;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
};

// Runs the individual computations; later steps reuse cached results of
// earlier ones, so any step may be called on its own.
class Pipeline {
public:
    explicit Pipeline(Fixtures fixtures = Fixtures::defaults(), PipelineOptions options = {});
    ~Pipeline();
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    std::vector<StepReport> step_patching();
    std::vector<StepReport> step_localization_formulas();
    std::vector<StepReport> step_class_Z();
    std::vector<StepReport> step_image_ideal_Z();
    std::vector<StepReport> step_D3();
    std::vector<StepReport> step_zeta();
    std::vector<StepReport> step_D33();
    std::vector<StepReport> step_final_presentation();
    std::vector<StepReport> step_transfer();
    // Oracle check of every pushforward computed by the steps run so far.
    std::vector<StepReport> step_oracle_sweep();

    PipelineReport run_all();

private:
    struct State;
    std::unique_ptr<State> state_;
};

PipelineReport run_all(const Fixtures& fixtures, const PipelineOptions& options);

std::string render_text(const PipelineReport& report, bool with_timing = true);
// One `step<TAB>verdict<TAB>computed<TAB>expected` line per step.
std::string render_machine(const PipelineReport& report);

}  // namespace equichow
