use serde::{Deserialize, Serialize};

use super::{
    degree_assortativity, density, global_efficiency, local_efficiency,
    weakly_connected_components, DensityMode, Graph, Workers,
};

/// The five structural measures plus size counts. `None` serializes as
/// `null` and marks a metric that is undefined for the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub giant_component_size: usize,
    pub density: Option<f64>,
    pub assortativity: Option<f64>,
    pub local_efficiency: Option<f64>,
    pub global_efficiency: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MetricsOptions {
    pub density_mode: DensityMode,
    pub workers: Workers,
}

pub fn full_metrics(g: &Graph, opts: MetricsOptions) -> MetricsReport {
    let components = weakly_connected_components(g);
    MetricsReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        components: components.count(),
        giant_component_size: components.giant_size(),
        density: density(g, opts.density_mode),
        assortativity: degree_assortativity(g),
        local_efficiency: local_efficiency(g, opts.workers),
        global_efficiency: global_efficiency(g, opts.workers),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::undirected(["a"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let r = full_metrics(&g, MetricsOptions::default());
        assert_eq!(r.components, 1);
        assert_eq!(r.giant_component_size, 3);
        assert_eq!(r.density, Some(1.0));
        assert_eq!(r.global_efficiency, Some(1.0));
        assert_eq!(r.local_efficiency, Some(1.0));
        assert_eq!(r.assortativity, None);
    }

    #[test]
    fn undefined_fields_do_not_fail_the_report() {
        let g = Graph::undirected(["solo"], Vec::<(&str, &str)>::new()).unwrap();
        let r = full_metrics(&g, MetricsOptions::default());
        assert_eq!(r.nodes, 1);
        assert_eq!(r.components, 1);
        assert_eq!(r.density, None);
        assert_eq!(r.global_efficiency, None);
        assert_eq!(r.local_efficiency, Some(0.0));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"density\":null"));
    }
}
