use serde::{Deserialize, Serialize};

use crate::clustering::ClusterTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Machine {
    pub id: usize,
    /// Leaf indices in placement order.
    pub leaves: Vec<usize>,
    pub load: u64,
    /// Set when the machine holds a single leaf larger than the capacity.
    pub over_capacity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub capacity: u64,
    pub machines: Vec<Machine>,
}

/// Assigns leaf clusters to machines by first-fit decreasing on triple load.
pub fn partition_plan(tree: &ClusterTree, capacity: u64) -> PartitionPlan {
    let loads: Vec<u64> = tree.leaves().iter().map(|l| l.triple_load).collect();
    first_fit_decreasing(&loads, capacity)
}

/// First-fit decreasing over arbitrary item loads. Items heavier than the
/// capacity get a flagged machine of their own.
pub fn first_fit_decreasing(loads: &[u64], capacity: u64) -> PartitionPlan {
    let mut order: Vec<usize> = (0..loads.len()).collect();
    order.sort_by(|&a, &b| loads[b].cmp(&loads[a]).then(a.cmp(&b)));
    let mut machines: Vec<Machine> = Vec::new();
    for item in order {
        let load = loads[item];
        if load > capacity {
            machines.push(Machine {
                id: machines.len(),
                leaves: vec![item],
                load,
                over_capacity: true,
            });
            continue;
        }
        match machines
            .iter_mut()
            .find(|m| !m.over_capacity && m.load + load <= capacity)
        {
            Some(m) => {
                m.leaves.push(item);
                m.load += load;
            }
            None => machines.push(Machine {
                id: machines.len(),
                leaves: vec![item],
                load,
                over_capacity: false,
            }),
        }
    }
    PartitionPlan { capacity, machines }
}
