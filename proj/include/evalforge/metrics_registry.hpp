#pragma once

#include <string>
#include <vector>

namespace evalforge::metrics {

/// Registered metric names, in registry order.
std::vector<std::string> registered_names();

bool is_registered(const std::string& name);

/// Family of a registered metric: "lexical", "semantic", "llm_judge", "rag".
/// Empty string if unregistered.
std::string family_of(const std::string& name);

/// True if the metric emits only {0,1} scores (routes analytical CIs to
/// Wilson and model comparisons to McNemar).
bool is_binary(const std::string& name);

/// True if the metric compares against a reference answer.
bool needs_reference(const std::string& name);

/// True if the metric consumes retrieved context chunks.
bool needs_contexts(const std::string& name);

}  // namespace evalforge::metrics
