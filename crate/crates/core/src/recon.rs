//! Reconstruction trees mapping a component coefficient to input indices.
//!
//! Nodes live in a per-run pool and are never mutated once pushed. A merge
//! consumes both parent trees, so every node has at most one parent and a
//! single expansion of a root touches each node of its tree at most once.

use crate::error::{Error, Result};
use crate::frobenius::{represent, MergePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconNode {
    /// A fresh singleton `{0, d_k}`; coefficients `0..=1`.
    Leaf { index: u32 },
    /// `AP(d, len) + {0, d}`; coefficients `0..=child_len + 1`.
    Extend {
        child: NodeId,
        child_len: u64,
        index: u32,
    },
    /// `left` is the temporary side (direction `v`), `right` the active side.
    Merge {
        left: NodeId,
        right: NodeId,
        plan: u32,
    },
}

#[derive(Debug, Default, Clone)]
pub struct ReconPool {
    nodes: Vec<ReconNode>,
    plans: Vec<MergePlan>,
    stack: Vec<(NodeId, u64)>,
}

impl ReconPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.nodes.clear();
        self.plans.clear();
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &ReconNode {
        &self.nodes[id.0 as usize]
    }

    pub fn plan(&self, id: NodeId) -> Option<&MergePlan> {
        match self.node(id) {
            ReconNode::Merge { plan, .. } => Some(&self.plans[*plan as usize]),
            _ => None,
        }
    }

    fn push(&mut self, node: ReconNode) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn leaf(&mut self, index: u32) -> NodeId {
        self.push(ReconNode::Leaf { index })
    }

    pub fn extend(&mut self, child: NodeId, child_len: u64, index: u32) -> NodeId {
        self.push(ReconNode::Extend {
            child,
            child_len,
            index,
        })
    }

    pub fn merge(&mut self, left: NodeId, right: NodeId, plan: MergePlan) -> NodeId {
        let plan_id = self.plans.len() as u32;
        self.plans.push(plan);
        self.push(ReconNode::Merge {
            left,
            right,
            plan: plan_id,
        })
    }

    /// Largest coefficient the node accepts (untruncated for merges).
    pub fn max_coefficient(&self, id: NodeId) -> u64 {
        match *self.node(id) {
            ReconNode::Leaf { .. } => 1,
            ReconNode::Extend { child_len, .. } => child_len + 1,
            ReconNode::Merge { plan, .. } => self.plans[plan as usize].length,
        }
    }

    /// Emits the input indices of `R(t)` for the tree rooted at `root` into
    /// `sink` and returns the number of nodes visited.
    pub fn expand(&mut self, root: NodeId, t: u64, sink: &mut Vec<u32>) -> Result<usize> {
        let max = self.max_coefficient(root);
        if t > max {
            return Err(Error::CoefficientOutOfRange { t, max });
        }
        let mut stack = std::mem::take(&mut self.stack);
        stack.clear();
        stack.push((root, t));
        let mut visited = 0usize;
        let result = loop {
            let Some((id, t)) = stack.pop() else {
                break Ok(visited);
            };
            visited += 1;
            match self.nodes[id.0 as usize] {
                ReconNode::Leaf { index } => match t {
                    0 => {}
                    1 => sink.push(index),
                    _ => break Err(Error::CoefficientOutOfRange { t, max: 1 }),
                },
                ReconNode::Extend {
                    child,
                    child_len,
                    index,
                } => {
                    if t <= child_len {
                        stack.push((child, t));
                    } else if t == child_len + 1 {
                        sink.push(index);
                        stack.push((child, child_len));
                    } else {
                        break Err(Error::CoefficientOutOfRange {
                            t,
                            max: child_len + 1,
                        });
                    }
                }
                ReconNode::Merge { left, right, plan } => {
                    match represent(&self.plans[plan as usize], t) {
                        Ok(rep) => {
                            stack.push((right, rep.beta));
                            stack.push((left, rep.alpha));
                        }
                        Err(e) => break Err(e),
                    }
                }
            }
        };
        self.stack = stack;
        result
    }
}
