#pragma once

#include <iosfwd>
#include <string>

#include "arorder/armodel.hpp"
#include "arorder/graph.hpp"
#include "arorder/ising.hpp"
#include "arorder/metrics.hpp"
#include "arorder/ordering.hpp"

namespace arorder {

// Graph text: "n <N>" then one "e <i> <j>" line per edge; '#' starts a
// comment.
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

// Model JSON: {"n": N, "fields": [...], "edges": [[i, j, theta], ...]}.
// Every edge must carry its coupling.
IsingModel read_model(std::istream& in);
void write_model(std::ostream& out, const IsingModel& m);

// Whitespace-separated 0-based node ids, exactly n of them.
Ordering read_ordering(std::istream& in, std::size_t n);
void write_ordering(std::ostream& out, const Ordering& sigma);

enum class SampleFormat { raw, counted };

// raw: one configuration per line, n tokens from {+1, 1, -1}.
// counted: a positive integer count followed by n spin tokens.
// n = 0 infers the width from the first row.
SampleSet read_samples(std::istream& in, SampleFormat format, std::size_t n = 0);
// Counted output requires integral weights.
void write_samples(std::ostream& out, const SampleSet& s, SampleFormat format);

// AR model JSON: ordering, per-node parents, max_order and coefficients in
// canonical basis order.
ARModel read_ar_model(std::istream& in);
void write_ar_model(std::ostream& out, const ARModel& ar);

// File-path conveniences; throw Error("io") when a file cannot be opened.
Graph load_graph(const std::string& path);
IsingModel load_model(const std::string& path);
Ordering load_ordering(const std::string& path, std::size_t n);
SampleSet load_samples(const std::string& path, SampleFormat format, std::size_t n = 0);
ARModel load_ar_model(const std::string& path);

SampleFormat parse_sample_format(const std::string& name);

}  // namespace arorder
