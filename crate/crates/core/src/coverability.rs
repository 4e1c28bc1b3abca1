//! Karp-Miller trees, coverability queries and exact ε-closures for
//! coverability acceptance.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::counter::{Counter, OmegaValue, OmegaVector};
use crate::error::{Error, Result};
use crate::vass::{Configuration, Index, Semantics, StateId, Vass};

/// A control state with an ω-abstracted counter vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaConfig<C> {
    pub state: StateId,
    pub vector: OmegaVector<C>,
}

impl<C: Counter> OmegaConfig<C> {
    pub fn concrete(c: &Configuration<C>) -> Self {
        OmegaConfig {
            state: c.state.clone(),
            vector: OmegaVector::finite(&c.counters),
        }
    }

    /// Same state and component-wise ≤.
    pub fn le(&self, other: &Self) -> bool {
        self.state == other.state && self.vector.le(&other.vector)
    }
}

impl<C: fmt::Display> fmt::Display for OmegaConfig<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.state, self.vector)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmNode<C> {
    pub state: StateId,
    pub vector: OmegaVector<C>,
    pub parent: Option<usize>,
    /// Transition that produced this node; `None` for roots.
    pub via: Option<usize>,
}

/// A Karp-Miller tree (a forest when built from several roots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmTree<C> {
    pub nodes: Vec<KmNode<C>>,
    /// Construction ran to completion.
    pub closed: bool,
}

impl<C: Counter> KmTree<C> {
    pub fn root(&self) -> &KmNode<C> {
        &self.nodes[0]
    }

    pub fn configs(&self) -> impl Iterator<Item = OmegaConfig<C>> + '_ {
        self.nodes.iter().map(|n| OmegaConfig {
            state: n.state.clone(),
            vector: n.vector.clone(),
        })
    }

    /// One node per line: `state vector parent-index via-transition-index`,
    /// `-` for absent parent/via.
    pub fn to_lines(&self) -> Vec<String> {
        self.nodes
            .iter()
            .map(|n| {
                let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
                let via = n.via.map_or("-".to_string(), |t| t.to_string());
                format!("{} {} {} {}", n.state, n.vector, parent, via)
            })
            .collect()
    }
}

fn build<C: Counter>(index: &Index<'_, C>, roots: Vec<OmegaConfig<C>>, eps_only: bool) -> KmTree<C> {
    let mut nodes: Vec<KmNode<C>> = Vec::new();
    let mut by_state: HashMap<StateId, Vec<usize>> = HashMap::new();
    let mut queue = VecDeque::new();

    let subsumed = |nodes: &[KmNode<C>], by_state: &HashMap<StateId, Vec<usize>>, s: &StateId, v: &OmegaVector<C>| {
        by_state
            .get(s)
            .is_some_and(|ids| ids.iter().any(|&i| v.le(&nodes[i].vector)))
    };

    for r in roots {
        if subsumed(&nodes, &by_state, &r.state, &r.vector) {
            continue;
        }
        let id = nodes.len();
        by_state.entry(r.state.clone()).or_default().push(id);
        nodes.push(KmNode {
            state: r.state,
            vector: r.vector,
            parent: None,
            via: None,
        });
        queue.push_back(id);
    }

    while let Some(id) = queue.pop_front() {
        let state = nodes[id].state.clone();
        for &t in index.outgoing(&state) {
            let tr = &index.vass.transitions[t];
            if eps_only && !tr.label.is_epsilon() {
                continue;
            }
            if !nodes[id].vector.enables(&tr.effect) {
                continue;
            }
            let mut child = nodes[id].vector.apply(&tr.effect);
            accelerate(&mut child, &tr.target, id, |a| (&nodes[a].state, &nodes[a].vector, nodes[a].parent));
            if subsumed(&nodes, &by_state, &tr.target, &child) {
                continue;
            }
            let cid = nodes.len();
            by_state.entry(tr.target.clone()).or_default().push(cid);
            nodes.push(KmNode {
                state: tr.target.clone(),
                vector: child,
                parent: Some(id),
                via: Some(t),
            });
            queue.push_back(cid);
        }
    }

    KmTree { nodes, closed: true }
}

/// Accelerates `child`, a successor of node `parent` in `target`, against
/// every strictly smaller ancestor on the parent chain.
fn accelerate<'a, C: Counter>(
    child: &mut OmegaVector<C>,
    target: &StateId,
    parent: usize,
    at: impl Fn(usize) -> (&'a StateId, &'a OmegaVector<C>, Option<usize>),
) {
    let mut anc = Some(parent);
    while let Some(a) = anc {
        let (state, vector, up) = at(a);
        if state == target && vector.le(child) && vector != &*child {
            for (c, old) in child.0.iter_mut().zip(&vector.0) {
                if old < c {
                    *c = OmegaValue::Omega;
                }
            }
        }
        anc = up;
    }
}

struct SatNode<C> {
    config: OmegaConfig<C>,
    parent: Option<usize>,
    live: bool,
}

/// Maximal ω-configurations reachable from `roots`. Works like a Karp-Miller
/// tree whose nodes are discarded once dominated: a dominated node is not
/// expanded, and acceleration still follows the full parent chain.
fn saturate<C: Counter>(index: &Index<'_, C>, roots: Vec<OmegaConfig<C>>, eps_only: bool) -> BTreeSet<OmegaConfig<C>> {
    let mut nodes: Vec<SatNode<C>> = Vec::new();
    let mut antichain: HashMap<StateId, Vec<usize>> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut insert = |nodes: &mut Vec<SatNode<C>>, queue: &mut VecDeque<usize>, config: OmegaConfig<C>, parent| {
        let ids = antichain.entry(config.state.clone()).or_default();
        if ids.iter().any(|&i| config.vector.le(&nodes[i].config.vector)) {
            return;
        }
        ids.retain(|&i| {
            let dominated = nodes[i].config.vector.le(&config.vector);
            nodes[i].live &= !dominated;
            !dominated
        });
        ids.push(nodes.len());
        queue.push_back(nodes.len());
        nodes.push(SatNode {
            config,
            parent,
            live: true,
        });
    };

    for r in roots {
        insert(&mut nodes, &mut queue, r, None);
    }
    while let Some(id) = queue.pop_front() {
        if !nodes[id].live {
            continue;
        }
        let state = nodes[id].config.state.clone();
        for &t in index.outgoing(&state) {
            let tr = &index.vass.transitions[t];
            if (eps_only && !tr.label.is_epsilon()) || !nodes[id].config.vector.enables(&tr.effect) {
                continue;
            }
            let mut child = nodes[id].config.vector.apply(&tr.effect);
            accelerate(&mut child, &tr.target, id, |a| {
                let n = &nodes[a];
                (&n.config.state, &n.config.vector, n.parent)
            });
            let config = OmegaConfig {
                state: tr.target.clone(),
                vector: child,
            };
            insert(&mut nodes, &mut queue, config, Some(id));
        }
    }
    nodes.into_iter().filter(|n| n.live).map(|n| n.config).collect()
}

/// Classical Karp-Miller tree from `(initial, 0⃗)`. Labels are ignored.
pub fn karp_miller<C: Counter>(vass: &Vass<C>) -> Result<KmTree<C>> {
    let root = OmegaConfig::concrete(&vass.initial_config()?);
    Ok(build(&Index::new(vass), vec![root], false))
}

/// Whether some reachable configuration in `state` is ≥ `target`.
pub fn coverable<C: Counter>(vass: &Vass<C>, state: &StateId, target: &[C]) -> Result<bool> {
    if target.len() != vass.dim {
        return Err(Error::InvalidArgument(format!(
            "target has {} entries, dimension is {}",
            target.len(),
            vass.dim
        )));
    }
    let tree = karp_miller(vass)?;
    Ok(tree
        .nodes
        .iter()
        .any(|n| &n.state == state && n.vector.covers(target)))
}

/// Non-emptiness of the language under coverability acceptance.
pub fn cover_language_nonempty<C: Counter>(vass: &Vass<C>) -> Result<bool> {
    if vass.semantics != Semantics::Coverability {
        return Err(Error::WrongSemantics(
            "language non-emptiness via Karp-Miller needs coverability".into(),
        ));
    }
    let tree = karp_miller(vass)?;
    Ok(tree.nodes.iter().any(|n| vass.is_accepting_state(&n.state)))
}

/// Whether some accepting state is reachable from one of `starts`,
/// with any sequence of transitions.
pub fn cover_nonempty_from<C: Counter>(vass: &Vass<C>, starts: &BTreeSet<OmegaConfig<C>>) -> bool {
    let index = Index::new(vass);
    if starts.iter().any(|c| index.is_accepting_state(&c.state)) {
        return true;
    }
    saturate(&index, starts.iter().cloned().collect(), false)
        .iter()
        .any(|c| index.is_accepting_state(&c.state))
}

/// Keeps the elements not strictly dominated by another element.
pub fn maximal_elements<C: Counter>(set: &BTreeSet<OmegaConfig<C>>) -> BTreeSet<OmegaConfig<C>> {
    set.iter()
        .filter(|&c| !set.iter().any(|d| d != c && c.le(d)))
        .cloned()
        .collect()
}

/// Karp-Miller saturation over ε-transitions from `configs`, reduced to its
/// maximal elements. An ω entry means arbitrarily large values are reachable.
pub fn eps_cover_closure<C: Counter>(
    vass: &Vass<C>,
    configs: &BTreeSet<Configuration<C>>,
) -> BTreeSet<OmegaConfig<C>> {
    let starts = configs.iter().map(OmegaConfig::concrete).collect();
    eps_cover_closure_omega(vass, &starts)
}

pub fn eps_cover_closure_omega<C: Counter>(
    vass: &Vass<C>,
    configs: &BTreeSet<OmegaConfig<C>>,
) -> BTreeSet<OmegaConfig<C>> {
    eps_closure_indexed(&Index::new(vass), configs)
}

pub(crate) fn eps_closure_indexed<C: Counter>(
    index: &Index<'_, C>,
    configs: &BTreeSet<OmegaConfig<C>>,
) -> BTreeSet<OmegaConfig<C>> {
    saturate(index, configs.iter().cloned().collect(), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vass::Semantics;

    fn omega_cfg(state: &str, v: &[Option<i64>]) -> OmegaConfig<i64> {
        OmegaConfig {
            state: StateId::new(state),
            vector: OmegaVector(
                v.iter()
                    .map(|x| x.map_or(OmegaValue::Omega, OmegaValue::Finite))
                    .collect(),
            ),
        }
    }

    fn self_loop() -> Vass<i64> {
        let mut v = Vass::new("loop", 1, Semantics::Coverability).with_alphabet(["a"]);
        v.add_state("q0", true, true);
        v.trans("q0", "a", &[1], "q0");
        v
    }

    #[test]
    fn self_loop_tree_is_exactly_two_nodes() {
        let tree = karp_miller(&self_loop()).unwrap();
        let configs: Vec<_> = tree.configs().collect();
        assert_eq!(configs, vec![omega_cfg("q0", &[Some(0)]), omega_cfg("q0", &[None])]);
        assert_eq!(tree.to_lines(), vec!["q0 [0] - -", "q0 [ω] 0 0"]);
        assert!(coverable(&self_loop(), &StateId::new("q0"), &[1000]).unwrap());
    }

    #[test]
    fn only_decrements_leave_the_root_alone() {
        let mut v: Vass<i64> = Vass::new("dec", 1, Semantics::Coverability).with_alphabet(["a"]);
        v.add_state("q0", true, false).add_state("qf", false, true);
        v.trans("q0", "a", &[-1], "qf");
        let tree = karp_miller(&v).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert!(!coverable(&v, &StateId::new("qf"), &[0]).unwrap());
        assert!(!cover_language_nonempty(&v).unwrap());
    }

    #[test]
    fn non_emptiness_checks() {
        let mut none: Vass<i64> = Vass::new("n", 0, Semantics::Coverability);
        none.add_state("p", true, false);
        assert!(!cover_language_nonempty(&none).unwrap());
        none.semantics = Semantics::Reachability;
        assert!(cover_language_nonempty(&none).is_err());
    }

    #[test]
    fn epsilon_closure_examples() {
        let mut v: Vass<i64> = Vass::new("e", 1, Semantics::Coverability).with_alphabet(["a"]);
        v.add_state("q0", true, true);
        v.trans("q0", "@eps", &[1], "q0");
        let start: BTreeSet<_> = [Configuration::from_ints("q0", &[0])].into();
        let closed = eps_cover_closure(&v, &start);
        assert_eq!(closed, [omega_cfg("q0", &[None])].into());

        let plain = self_loop();
        let set: BTreeSet<_> = [Configuration::from_ints("q0", &[4])].into();
        assert_eq!(eps_cover_closure(&plain, &set), [omega_cfg("q0", &[Some(4)])].into());
    }
}
