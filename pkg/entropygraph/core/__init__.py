"""
Licensed to the Apache Software Foundation (ASF) under one
or more contributor license agreements.  See the NOTICE file
distributed with this work for additional information
regarding copyright ownership.  The ASF licenses this file
to you under the Apache License, Version 2.0 (the
"License"); you may not use this file except in compliance
with the License.  You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing,
software distributed under the License is distributed on an
"AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
KIND, either express or implied.  See the License for the
specific language governing permissions and limitations
under the License.
"""
__license__ = 'Apache 2.0'
__status__ = 'Development'

# Import order matters: later modules import earlier names from this package.

from .exceptions import (
    BoundaryOptimum,
    DegreeSequenceException,
    DisjointImages,
    DomainError,
    EmptyFamily,
    EntropyGraphException,
    GuaranteeViolation,
    Infeasible,
    InvalidDegreeSequence,
    MalformedCode,
    NoFeasibleK,
    NonConvergence,
    OddM,
    SizeGuard,
    SolverException,
    SumMismatch,
    WeightOutOfRange,
)


from entropygraph.core.utils.utils import (
    binomial_sigma,
    memoized_property,
    pair_position,
    upper_pairs,
)


from entropygraph.core.conf.settings import (
    LazySettings,
    Settings,
    section,
    settings_default,
)


from entropygraph.core.logging.formatters import (
    JSONFormatter,
)


from entropygraph.core.logging.slogging import (
    build_logconfig,
    load_logconfig,
)


from entropygraph.core.event.event import (
    EVENT_TOPIC,
    EventLogger,
    event_bus,
    publish,
)

from entropygraph.core.serialize import abcs as serialize_abcs
from entropygraph.core.graphs import abcs as graphs_abcs


from entropygraph.core.serialize.marshalling import (
    default_marshaller,
)


from entropygraph.core.serialize.serialize import (
    JSONSerializer,
    SerializationManager,
)


from entropygraph.core.concurrency.concurrency import (
    ReplicaExecutor,
    spawn_generators,
    worker_count,
)


from entropygraph.core.graphs.graph import (
    SimpleGraph,
    format_edge_list,
    read_edge_list,
    read_weighted_bipartite,
    write_edge_list,
)


from entropygraph.core.degseq.degseq import (
    DegreeSequence,
    DenseEGReport,
    EGReport,
    TypeClassification,
    check_dense_eg,
    check_erdos_gallai,
    classify_type,
    dense_eg_bruteforce,
    ell,
    havel_hakimi,
    is_graphical_vector,
    s_k,
    small_degree_set,
)


from entropygraph.core.entropy.entropy_settings import (
    SolverSettings,
)


from entropygraph.core.entropy.entropy import (
    BipartiteMaxEntropySolution,
    CheckResult,
    DualObjectives,
    MaxEntropySolution,
    MaxEntropySolver,
    QModel,
    RRegularityReport,
    c1_of_d,
    c2_of_d,
    c2_upper_bound,
    dual_f,
    dual_g,
    dual_objectives,
    entropy_h1,
    log_prob_bipartite_graph,
    log_prob_graph,
    log_prob_lower_bound,
    mckay_log_count,
    q_model,
    r_regularity_report,
    solve_bipartite_max_entropy,
    solve_max_entropy,
)


from entropygraph.core.trees.trees_settings import (
    TreeSettings,
)


from entropygraph.core.trees.trees import (
    EmbeddingCounter,
    LabeledTree,
    OrderedTree,
    PrueferCode,
    bipartite_admissible,
    enumerate_trees,
    iter_placements,
    iter_tree_images,
    normalized_tree_total,
    pruefer_decode,
    pruefer_encode,
    log_psi,
    psi,
    psi_exact,
    psi_invariance_check,
    tree_shapes,
    wedge_sum,
    weighted_embedding_sum,
    z_discrepancy,
)


from entropygraph.core.graphs.graphs_settings import (
    SamplerSettings,
)


from entropygraph.core.graphs.sampling import (
    AlmostDegreeSampler,
    BipartiteSwapSampler,
    EnumerationSampler,
    IdentityReport,
    MatrixBernoulliModel,
    ReweightedRejectionSampler,
    SamplerConfig,
    SamplerMethod,
    UniformBernoulliModel,
    UniformDegreeSampler,
    almost_degree_sampler,
    bernoulli_edge_indicators,
    conditional_probability_identity_check,
    degree_box,
    degree_sampler,
    enumerate_bipartite,
    enumerate_ga,
    enumerate_gd,
    gale_ryser_realization,
    indicator_degrees,
    membership_ga,
    sample_bernoulli,
    sample_bipartite_uniform,
    sample_uniform_ga,
    sample_uniform_gd,
)


from entropygraph.core.rounding.rounding_settings import (
    RoundingSettings,
)


from entropygraph.core.rounding.rounding import (
    Augmentation,
    RoundingResult,
    WeightedBipartiteGraph,
    build_crossing_tree,
    round_to_integral,
)


from entropygraph.core.stats.stats_settings import (
    StatsSettings,
)

from entropygraph.core.stats import abcs as stats_abcs


from entropygraph.core.stats.stats import (
    EnumeratedLaw,
    IndependentEdgeLaw,
    LReport,
    SampledLaw,
    TotalSumReport,
    TreeProbEstimate,
    estimate_tree_prob,
    exact_tree_prob_tilde,
    exact_tree_prob_uniform,
    exact_tree_total,
    reference_degrees,
    total_sum_check,
    weighted_l_statistic,
)


from entropygraph.core.stats.concentration import (
    ConcentrationFamily,
    DeltaBoundsReport,
    JansonParameters,
    LowerTailEstimate,
    MGFEstimate,
    PipelineReport,
    chernoff_bound,
    delta_bounds_check,
    edge_family,
    empirical_lower_tail,
    empirical_mgf,
    janson_bound,
    janson_mgf_bound,
    janson_parameters,
    lower_bound_pipeline,
    tree_family,
    wedge_overcount_constant,
)
