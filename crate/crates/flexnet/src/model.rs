//! Network data model: topology, capacities, design variables and design cost.
//!
//! A [`Network`] is a directed flow network with base capacities on arcs and
//! suppliers, and demands that act as placeholders for entries of an uncertain
//! demand vector. A [`DesignVector`] holds nonnegative capacity expansions for
//! every supplier and arc; [`cost`] prices them with a [`CostSpec`].
//!
//! Demands are allowed to take negative realizations — distributions with
//! unbounded support are not truncated. Arc capacities are symmetric: a flow
//! may run in either direction within `±(capacity + expansion)`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A directed arc with a symmetric base capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub id: String,
    pub from: String,
    pub to: String,
    /// Base capacity; flow is constrained to `±(capacity + expansion)`.
    pub capacity: f64,
}

/// A supplier attached to a node, bounded to `[0, capacity + expansion]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Supplier {
    pub id: String,
    pub node: String,
    pub capacity: f64,
}

/// A demand attached to a node, fed by one entry of the uncertain vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Demand {
    pub id: String,
    pub node: String,
    /// 1-based index into the uncertain demand vector.
    pub theta_index: usize,
}

/// A flow network with base capacities and uncertain demands.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub nodes: Vec<String>,
    pub arcs: Vec<Arc>,
    pub suppliers: Vec<Supplier>,
    pub demands: Vec<Demand>,
}

/// One violation found by [`Network::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Identifier of the offending element, when one exists.
    pub element: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.element {
            Some(e) => write!(f, "{}: {}", e, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("design vector dimension mismatch: expected {expected} suppliers and {expected_arcs} arcs, got {got} and {got_arcs}")]
    DesignDimension {
        expected: usize,
        expected_arcs: usize,
        got: usize,
        got_arcs: usize,
    },
    #[error("cost weight vector has length {got}, expected {expected}")]
    WeightDimension { expected: usize, got: usize },
    #[error("negative cost weight at position {0}")]
    NegativeWeight(usize),
}

impl Network {
    /// Number of uncertain demand entries.
    pub fn n_theta(&self) -> usize {
        self.demands.len()
    }

    /// Number of design variables, `|suppliers| + |arcs|`.
    pub fn n_design(&self) -> usize {
        self.suppliers.len() + self.arcs.len()
    }

    /// Checks every structural invariant and reports all violations found.
    ///
    /// An empty report means the network is valid. The check is side-effect
    /// free and idempotent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let viol = |element: Option<&str>, message: String| Violation {
            element: element.map(str::to_owned),
            message,
        };

        if self.nodes.is_empty() {
            report.push(viol(None, "network has no nodes".into()));
        }
        if self.demands.is_empty() {
            report.push(viol(None, "network has no demands".into()));
        }

        let mut seen = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(first) = seen.insert(n.as_str(), i) {
                report.push(viol(
                    Some(n),
                    format!("duplicate node (positions {} and {})", first, i),
                ));
            }
        }
        let known = |name: &str| seen.contains_key(name);

        let mut ids = HashMap::new();
        let mut check_id = |id: &str, kind: &str, report: &mut Vec<Violation>| {
            if let Some(prev) = ids.insert(id.to_owned(), kind.to_owned()) {
                report.push(viol(
                    Some(id),
                    format!("duplicate identifier (already used by a {})", prev),
                ));
            }
        };

        for a in &self.arcs {
            check_id(&a.id, "arc", &mut report);
            for end in [&a.from, &a.to] {
                if !known(end) {
                    report.push(viol(
                        Some(&a.id),
                        format!("arc endpoint '{}' is not a declared node", end),
                    ));
                }
            }
            if !a.capacity.is_finite() || a.capacity < 0.0 {
                report.push(viol(
                    Some(&a.id),
                    format!("arc capacity {} is not finite and >= 0", a.capacity),
                ));
            }
        }

        for s in &self.suppliers {
            check_id(&s.id, "supplier", &mut report);
            if !known(&s.node) {
                report.push(viol(
                    Some(&s.id),
                    format!("supplier node '{}' is not a declared node", s.node),
                ));
            }
            if !s.capacity.is_finite() || s.capacity < 0.0 {
                report.push(viol(
                    Some(&s.id),
                    format!("supplier capacity {} is not finite and >= 0", s.capacity),
                ));
            }
        }

        let n_theta = self.demands.len();
        let mut theta_seen: Vec<Option<&str>> = vec![None; n_theta];
        for d in &self.demands {
            check_id(&d.id, "demand", &mut report);
            if !known(&d.node) {
                report.push(viol(
                    Some(&d.id),
                    format!("demand node '{}' is not a declared node", d.node),
                ));
            }
            if d.theta_index == 0 || d.theta_index > n_theta {
                report.push(viol(
                    Some(&d.id),
                    format!(
                        "theta-index {} not bijective: outside 1..={}",
                        d.theta_index, n_theta
                    ),
                ));
            } else if let Some(prev) = theta_seen[d.theta_index - 1] {
                report.push(viol(
                    Some(&d.id),
                    format!(
                        "theta-index {} not bijective: already used by '{}'",
                        d.theta_index, prev
                    ),
                ));
            } else {
                theta_seen[d.theta_index - 1] = Some(&d.id);
            }
        }

        report
    }

    /// Validates and returns the network, or the first violation as an error.
    pub fn checked(self) -> Result<Self, ModelError> {
        let report = self.validate();
        match report.first() {
            None => Ok(self),
            Some(v) => Err(ModelError::InvalidNetwork(v.to_string())),
        }
    }
}

/// Compiled index view of a valid [`Network`], used by the solvers.
///
/// Node, arc, supplier and demand positions are resolved to dense indices,
/// and the demand-to-theta permutation is precomputed.
#[derive(Debug, Clone)]
pub struct Topology {
    pub n_nodes: usize,
    /// Arc endpoints as (from, to) node indices, in arc declaration order.
    pub arc_ends: Vec<(usize, usize)>,
    /// Supplier node index, in supplier declaration order.
    pub supplier_node: Vec<usize>,
    /// Demand node index, in demand declaration order.
    pub demand_node: Vec<usize>,
    /// For each demand (declaration order), the 0-based entry of theta it reads.
    pub demand_theta: Vec<usize>,
}

impl Topology {
    pub fn new(net: &Network) -> Result<Self, ModelError> {
        let report = net.validate();
        if let Some(v) = report.first() {
            return Err(ModelError::InvalidNetwork(v.to_string()));
        }
        let index: HashMap<&str, usize> = net
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        Ok(Topology {
            n_nodes: net.nodes.len(),
            arc_ends: net
                .arcs
                .iter()
                .map(|a| (index[a.from.as_str()], index[a.to.as_str()]))
                .collect(),
            supplier_node: net.suppliers.iter().map(|s| index[s.node.as_str()]).collect(),
            demand_node: net.demands.iter().map(|d| index[d.node.as_str()]).collect(),
            demand_theta: net.demands.iter().map(|d| d.theta_index - 1).collect(),
        })
    }
}

/// Nonnegative capacity expansions, indexed like the owning network.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector {
    /// Expansion per supplier, in supplier declaration order.
    pub supplier: Vec<f64>,
    /// Expansion per arc, in arc declaration order.
    pub arc: Vec<f64>,
}

impl DesignVector {
    pub fn zeros(net: &Network) -> Self {
        DesignVector {
            supplier: vec![0.0; net.suppliers.len()],
            arc: vec![0.0; net.arcs.len()],
        }
    }

    /// Builds from a flat slice in supplier-then-arc order.
    pub fn from_flat(net: &Network, flat: &[f64]) -> Result<Self, ModelError> {
        if flat.len() != net.n_design() {
            return Err(ModelError::DesignDimension {
                expected: net.suppliers.len(),
                expected_arcs: net.arcs.len(),
                got: flat.len().min(net.suppliers.len()),
                got_arcs: flat.len().saturating_sub(net.suppliers.len()),
            });
        }
        let (s, a) = flat.split_at(net.suppliers.len());
        Ok(DesignVector {
            supplier: s.to_vec(),
            arc: a.to_vec(),
        })
    }

    /// Flat view in supplier-then-arc order.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.supplier.clone();
        v.extend_from_slice(&self.arc);
        v
    }

    pub fn matches(&self, net: &Network) -> bool {
        self.supplier.len() == net.suppliers.len() && self.arc.len() == net.arcs.len()
    }

    /// True when every entry is finite and nonnegative.
    pub fn is_valid(&self) -> bool {
        self.supplier
            .iter()
            .chain(self.arc.iter())
            .all(|d| d.is_finite() && *d >= 0.0)
    }

    fn check(&self, net: &Network) -> Result<(), ModelError> {
        if !self.matches(net) {
            return Err(ModelError::DesignDimension {
                expected: net.suppliers.len(),
                expected_arcs: net.arcs.len(),
                got: self.supplier.len(),
                got_arcs: self.arc.len(),
            });
        }
        Ok(())
    }
}

/// Unit costs for design variables.
///
/// The default prices every variable at `1/sqrt(n_d)`; explicit per-variable
/// weights (supplier-then-arc order) may override it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CostSpec {
    pub weights: Option<Vec<f64>>,
}

impl CostSpec {
    pub fn uniform() -> Self {
        CostSpec { weights: None }
    }

    pub fn with_weights(weights: Vec<f64>) -> Self {
        CostSpec {
            weights: Some(weights),
        }
    }

    /// Weight of design variable `i` (supplier-then-arc order) out of `n_d`.
    pub fn weight(&self, i: usize, n_d: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / (n_d as f64).sqrt(),
        }
    }

    pub fn check(&self, n_d: usize) -> Result<(), ModelError> {
        if let Some(w) = &self.weights {
            if w.len() != n_d {
                return Err(ModelError::WeightDimension {
                    expected: n_d,
                    got: w.len(),
                });
            }
            if let Some(i) = w.iter().position(|x| !x.is_finite() || *x < 0.0) {
                return Err(ModelError::NegativeWeight(i));
            }
        }
        Ok(())
    }
}

/// Design cost: weighted sum of all expansions, `1/sqrt(n_d)` per unit by default.
pub fn cost(net: &Network, design: &DesignVector, spec: &CostSpec) -> Result<f64, ModelError> {
    design.check(net)?;
    let n_d = net.n_design();
    spec.check(n_d)?;
    let flat = design.to_flat();
    Ok(flat
        .iter()
        .enumerate()
        .map(|(i, d)| spec.weight(i, n_d) * d)
        .sum())
}

/// Effective capacities after applying a design.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedCapacities {
    /// Per arc: flow must stay within `±bound`.
    pub arc_bound: Vec<f64>,
    /// Per supplier: supply must stay within `[0, upper]`.
    pub supplier_upper: Vec<f64>,
}

/// Base capacities plus expansions; arcs are symmetric, suppliers floored at zero.
pub fn expanded_capacities(
    net: &Network,
    design: &DesignVector,
) -> Result<ExpandedCapacities, ModelError> {
    design.check(net)?;
    Ok(ExpandedCapacities {
        arc_bound: net
            .arcs
            .iter()
            .zip(&design.arc)
            .map(|(a, d)| a.capacity + d)
            .collect(),
        supplier_upper: net
            .suppliers
            .iter()
            .zip(&design.supplier)
            .map(|(s, d)| s.capacity + d)
            .collect(),
    })
}

/// Convenience builder for networks, mainly used by tests and parsers.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    net: Network,
}

impl Default for Network {
    fn default() -> Self {
        Network {
            nodes: Vec::new(),
            arcs: Vec::new(),
            suppliers: Vec::new(),
            demands: Vec::new(),
        }
    }
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: &str) -> Self {
        self.net.nodes.push(name.to_owned());
        self
    }

    pub fn arc(mut self, id: &str, from: &str, to: &str, capacity: f64) -> Self {
        self.net.arcs.push(Arc {
            id: id.to_owned(),
            from: from.to_owned(),
            to: to.to_owned(),
            capacity,
        });
        self
    }

    pub fn supplier(mut self, id: &str, node: &str, capacity: f64) -> Self {
        self.net.suppliers.push(Supplier {
            id: id.to_owned(),
            node: node.to_owned(),
            capacity,
        });
        self
    }

    pub fn demand(mut self, id: &str, node: &str, theta_index: usize) -> Self {
        self.net.demands.push(Demand {
            id: id.to_owned(),
            node: node.to_owned(),
            theta_index,
        });
        self
    }

    /// Finishes without validating; call [`Network::checked`] to validate.
    pub fn build(self) -> Network {
        self.net
    }
}

/// Single node with one supplier of capacity 1 and one demand; no arcs.
///
/// The smallest valid network, used throughout the tests.
pub fn unit_network() -> Network {
    NetworkBuilder::new()
        .node("n1")
        .supplier("s1", "n1", 1.0)
        .demand("r1", "n1", 1)
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_network_is_valid() {
        assert!(unit_network().validate().is_empty());
    }

    #[test]
    fn arc_to_unknown_node_is_reported() {
        let net = NetworkBuilder::new()
            .node("n1")
            .arc("a1", "n1", "nowhere", 1.0)
            .supplier("s1", "n1", 1.0)
            .demand("r1", "n1", 1)
            .build();
        let report = net.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].element.as_deref(), Some("a1"));
        assert!(report[0].message.contains("nowhere"));
    }

    #[test]
    fn duplicate_theta_index_is_reported() {
        let net = NetworkBuilder::new()
            .node("n1")
            .node("n2")
            .supplier("s1", "n1", 1.0)
            .demand("r1", "n1", 1)
            .demand("r2", "n2", 1)
            .build();
        let report = net.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("not bijective"));
    }

    #[test]
    fn validate_is_idempotent() {
        let net = unit_network();
        assert_eq!(net.validate(), net.validate());
    }

    #[test]
    fn zero_design_costs_nothing() {
        let net = unit_network();
        let d = DesignVector::zeros(&net);
        assert_eq!(cost(&net, &d, &CostSpec::uniform()).unwrap(), 0.0);
    }

    #[test]
    fn four_unit_expansions_cost_two() {
        // n_d = 4, every expansion 1 -> 4 / sqrt(4) = 2
        let net = NetworkBuilder::new()
            .node("n1")
            .node("n2")
            .arc("a1", "n1", "n2", 5.0)
            .arc("a2", "n2", "n1", 5.0)
            .supplier("s1", "n1", 1.0)
            .supplier("s2", "n2", 1.0)
            .demand("r1", "n1", 1)
            .build();
        let d = DesignVector {
            supplier: vec![1.0, 1.0],
            arc: vec![1.0, 1.0],
        };
        let c = cost(&net, &d, &CostSpec::uniform()).unwrap();
        assert!((c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_variable_cost_is_identity() {
        // n_d = 1 -> unit weight 1/sqrt(1) = 1
        let net = unit_network();
        let d = DesignVector {
            supplier: vec![1.5],
            arc: vec![],
        };
        let c = cost(&net, &d, &CostSpec::uniform()).unwrap();
        assert!((c - 1.5).abs() < 1e-12);
    }

    #[test]
    fn cost_rejects_dimension_mismatch() {
        let net = unit_network();
        let d = DesignVector {
            supplier: vec![1.0, 2.0],
            arc: vec![],
        };
        assert!(cost(&net, &d, &CostSpec::uniform()).is_err());
    }

    #[test]
    fn expanded_capacities_add_up() {
        let net = NetworkBuilder::new()
            .node("n1")
            .node("n2")
            .arc("a1", "n1", "n2", 100.0)
            .supplier("s1", "n1", 1.0)
            .demand("r1", "n2", 1)
            .build();
        let zero = DesignVector::zeros(&net);
        let caps = expanded_capacities(&net, &zero).unwrap();
        assert_eq!(caps.arc_bound, vec![100.0]);
        assert_eq!(caps.supplier_upper, vec![1.0]);

        let d = DesignVector {
            supplier: vec![1.5],
            arc: vec![0.0],
        };
        let caps = expanded_capacities(&net, &d).unwrap();
        assert_eq!(caps.supplier_upper, vec![2.5]);
    }

    #[test]
    fn negative_design_is_flagged_invalid() {
        let net = unit_network();
        let d = DesignVector {
            supplier: vec![-0.1],
            arc: vec![],
        };
        assert!(!d.is_valid());
    }

    proptest! {
        // cost(a*d1 + b*d2) = a*cost(d1) + b*cost(d2) for a, b >= 0
        #[test]
        fn cost_is_linear(
            d1 in proptest::collection::vec(0.0..100.0f64, 4),
            d2 in proptest::collection::vec(0.0..100.0f64, 4),
            a in 0.0..10.0f64,
            b in 0.0..10.0f64,
        ) {
            let net = NetworkBuilder::new()
                .node("n1")
                .node("n2")
                .arc("a1", "n1", "n2", 5.0)
                .arc("a2", "n2", "n1", 5.0)
                .supplier("s1", "n1", 1.0)
                .supplier("s2", "n2", 1.0)
                .demand("r1", "n1", 1)
                .build();
            let spec = CostSpec::uniform();
            let mk = |v: &[f64]| DesignVector::from_flat(&net, v).unwrap();
            let combo: Vec<f64> = d1.iter().zip(&d2).map(|(x, y)| a * x + b * y).collect();
            let lhs = cost(&net, &mk(&combo), &spec).unwrap();
            let rhs = a * cost(&net, &mk(&d1), &spec).unwrap() + b * cost(&net, &mk(&d2), &spec).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs() + rhs.abs()));
        }

        // expansions never shrink effective capacity
        #[test]
        fn expanded_capacities_monotone(
            base in proptest::collection::vec(0.0..50.0f64, 2),
            extra in proptest::collection::vec(0.0..50.0f64, 2),
        ) {
            let net = NetworkBuilder::new()
                .node("n1")
                .node("n2")
                .arc("a1", "n1", "n2", 10.0)
                .supplier("s1", "n1", 3.0)
                .demand("r1", "n2", 1)
                .build();
            let d0 = DesignVector { supplier: vec![base[0]], arc: vec![base[1]] };
            let d1 = DesignVector {
                supplier: vec![base[0] + extra[0]],
                arc: vec![base[1] + extra[1]],
            };
            let c0 = expanded_capacities(&net, &d0).unwrap();
            let c1 = expanded_capacities(&net, &d1).unwrap();
            prop_assert!(c1.arc_bound[0] >= c0.arc_bound[0]);
            prop_assert!(c1.supplier_upper[0] >= c0.supplier_upper[0]);
        }
    }
}
