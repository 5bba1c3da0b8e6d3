//! Vertex-removing synchronised products of labelled digraphs and the
//! decomposition of layered graphs into two such factors.

pub mod contraction;
pub mod decomposition;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod isomorphism;
pub mod products;

pub use contraction::{contract_family, contract_set, NamedSet};
pub use decomposition::{
    check_preconditions, decompose_auto, decompose_bipartite, decompose_npartite, decompose_with_families,
    verify_decomposition, Decomposition, PreconditionReport, VerificationReport, Verdict,
};
pub use error::{Error, Result};
pub use graph::{Arc, LabelPair, LabeledDigraph, LayerPartition, VertexSet, Weight};
pub use isomorphism::{find_isomorphism, IsoWitness};
pub use products::{cartesian, intermediate, vrsp, ProductVertex};
