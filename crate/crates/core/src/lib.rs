pub mod binning;
pub mod graph;
pub mod heavytail;
pub mod ingest;
pub mod pipeline;

/// Version stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graph-metrics.md")]
    mod graph_metrics {}
    #[doc = include_str!("../../../book/src/heavy-tails.md")]
    mod heavy_tails {}
    #[doc = include_str!("../../../book/src/binning.md")]
    mod binning {}
    #[doc = include_str!("../../../book/src/tail-walk.md")]
    mod tail_walk {}
    #[doc = include_str!("../../../book/src/ingest.md")]
    mod ingest {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
