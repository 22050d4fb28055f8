//! The hyperelliptic Rauzy class R_d over A_d = {d−1, d−3, …, 1−d}, built
//! inductively from the central vertex, with words, winners and elementary loops.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{KzError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArrowType {
    Top,
    Bottom,
}

impl ArrowType {
    pub fn letter(self) -> char {
        match self {
            ArrowType::Top => 't',
            ArrowType::Bottom => 'b',
        }
    }

    pub fn other(self) -> Self {
        match self {
            ArrowType::Top => ArrowType::Bottom,
            ArrowType::Bottom => ArrowType::Top,
        }
    }
}

impl fmt::Display for ArrowType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Position of letter k ∈ A_d in ascending order.
fn slot(d: usize, k: i64) -> usize {
    ((k + d as i64 - 1) / 2) as usize
}

/// The letters of A_d, ascending.
pub fn letters(d: usize) -> Vec<i64> {
    (0..d as i64).map(|i| 2 * i + 1 - d as i64).collect()
}

/// A pair (π_t, π_b) of bijections A_d → {1, …, d}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationPair {
    pub d: usize,
    /// `top[i]` is π_t of the i-th letter in ascending order.
    pub top: Vec<u32>,
    pub bottom: Vec<u32>,
}

impl PermutationPair {
    pub fn central(d: usize) -> Self {
        let top = letters(d).iter().map(|&k| ((d as i64 + 1 + k) / 2) as u32).collect();
        let bottom = letters(d).iter().map(|&k| ((d as i64 + 1 - k) / 2) as u32).collect();
        PermutationPair { d, top, bottom }
    }

    pub fn pi_t(&self, k: i64) -> u32 {
        self.top[slot(self.d, k)]
    }

    pub fn pi_b(&self, k: i64) -> u32 {
        self.bottom[slot(self.d, k)]
    }

    pub fn is_valid(&self) -> bool {
        let ok = |v: &[u32]| {
            let mut s: Vec<u32> = v.to_vec();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| x == i as u32 + 1)
        };
        self.top.len() == self.d && self.bottom.len() == self.d && ok(&self.top) && ok(&self.bottom)
    }

    fn letter_at(row: &[u32], d: usize, pos: u32) -> i64 {
        let i = row.iter().position(|&x| x == pos).expect("bijection");
        2 * i as i64 + 1 - d as i64
    }

    /// j_t: R_d → R_{d+1}.
    pub fn j_t(&self) -> Self {
        let d = self.d as i64;
        let pivot = self.pi_b(d - 3);
        let mut out = PermutationPair {
            d: self.d + 1,
            top: vec![0; self.d + 1],
            bottom: vec![0; self.d + 1],
        };
        let n = self.d + 1;
        out.top[slot(n, -d)] = 1;
        out.bottom[slot(n, -d)] = pivot;
        for k in ((2 - d)..=d).step_by(2) {
            out.top[slot(n, k)] = 1 + self.pi_t(k - 1);
            let b = self.pi_b(k - 1);
            out.bottom[slot(n, k)] = if b < pivot { b } else { b + 1 };
        }
        out
    }

    /// j_b: R_d → R_{d+1}.
    pub fn j_b(&self) -> Self {
        let d = self.d as i64;
        let pivot = self.pi_t(3 - d);
        let mut out = PermutationPair {
            d: self.d + 1,
            top: vec![0; self.d + 1],
            bottom: vec![0; self.d + 1],
        };
        let n = self.d + 1;
        out.bottom[slot(n, d)] = 1;
        out.top[slot(n, d)] = pivot;
        for k in ((-d)..=(d - 2)).step_by(2) {
            out.bottom[slot(n, k)] = 1 + self.pi_b(k + 1);
            let t = self.pi_t(k + 1);
            out.top[slot(n, k)] = if t < pivot { t } else { t + 1 };
        }
        out
    }

    /// The standard Rauzy–Veech move of the given type, returning the image
    /// and the winning letter. Independent of the inductive construction.
    pub fn rauzy_move(&self, kind: ArrowType) -> (Self, i64) {
        let d = self.d as u32;
        let last_t = Self::letter_at(&self.top, self.d, d);
        let last_b = Self::letter_at(&self.bottom, self.d, d);
        let mut next = self.clone();
        let (winner, loser, row) = match kind {
            ArrowType::Top => (last_t, last_b, &mut next.bottom),
            ArrowType::Bottom => (last_b, last_t, &mut next.top),
        };
        let pos = row[slot(self.d, winner)];
        for x in row.iter_mut() {
            if *x > pos && *x < d {
                *x += 1;
            }
        }
        row[slot(self.d, loser)] = pos + 1;
        (next, winner)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementaryLoop {
    pub kind: ArrowType,
    /// Word of the distinguished vertex.
    pub base: String,
    pub length: usize,
    pub winner: i64,
    /// Words of the vertices along the loop, starting at the base.
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RauzyDiagram {
    pub d: usize,
    pub vertices: Vec<PermutationPair>,
    pub words: Vec<String>,
    pub r_t: Vec<usize>,
    pub r_b: Vec<usize>,
    pub central: usize,
    #[serde(skip)]
    by_word: HashMap<String, usize>,
    #[serde(skip)]
    by_pair: HashMap<PermutationPair, usize>,
}

/// Arrow of the given type on words of length < d − 1, from the conjugation rules.
pub fn arrow_on_word(word: &str, kind: ArrowType, d: usize) -> String {
    if d == 2 {
        return String::new();
    }
    let Some(first) = word.chars().next() else {
        return kind.letter().to_string();
    };
    let inner = arrow_on_word(&word[1..], kind, d - 1);
    if first == kind.other().letter() {
        format!("{first}{inner}")
    } else if inner.is_empty() {
        String::new()
    } else {
        format!("{first}{inner}")
    }
}

fn pair_of_word(word: &str, d: usize) -> PermutationPair {
    match word.chars().next() {
        None => PermutationPair::central(d),
        Some('t') => pair_of_word(&word[1..], d - 1).j_t(),
        Some(_) => pair_of_word(&word[1..], d - 1).j_b(),
    }
}

pub fn build_diagram(d: usize) -> Result<RauzyDiagram> {
    if d < 2 {
        return Err(KzError::InvalidParameter(format!("Rauzy diagram needs d ≥ 2, got {d}")));
    }
    let mut words = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 1..(d - 1) {
        frontier = frontier
            .iter()
            .flat_map(|w| [format!("{w}t"), format!("{w}b")])
            .collect();
        words.extend(frontier.iter().cloned());
    }
    let vertices: Vec<PermutationPair> = words.iter().map(|w| pair_of_word(w, d)).collect();
    let by_word: HashMap<String, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let by_pair: HashMap<PermutationPair, usize> =
        vertices.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let arrows = |kind| -> Vec<usize> {
        words
            .iter()
            .map(|w| by_word[&arrow_on_word(w, kind, d)])
            .collect()
    };
    let r_t = arrows(ArrowType::Top);
    let r_b = arrows(ArrowType::Bottom);
    Ok(RauzyDiagram {
        d,
        vertices,
        words,
        r_t,
        r_b,
        central: 0,
        by_word,
        by_pair,
    })
}

impl RauzyDiagram {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arrow(&self, v: usize, kind: ArrowType) -> usize {
        match kind {
            ArrowType::Top => self.r_t[v],
            ArrowType::Bottom => self.r_b[v],
        }
    }

    pub fn index_of(&self, pair: &PermutationPair) -> Result<usize> {
        self.by_pair
            .get(pair)
            .copied()
            .ok_or_else(|| KzError::VertexNotFound(format!("{pair:?}")))
    }

    pub fn index_of_word(&self, word: &str) -> Result<usize> {
        self.by_word
            .get(word)
            .copied()
            .ok_or_else(|| KzError::VertexNotFound(format!("word {word:?}")))
    }

    pub fn word_of(&self, pair: &PermutationPair) -> Result<&str> {
        Ok(&self.words[self.index_of(pair)?])
    }

    /// (top winner, bottom winner) = (d−1−2w_b, 1−d+2w_t).
    pub fn winners(&self, v: usize) -> (i64, i64) {
        let w = &self.words[v];
        let wb = w.chars().filter(|&c| c == 'b').count() as i64;
        let wt = w.len() as i64 - wb;
        let d = self.d as i64;
        (d - 1 - 2 * wb, 1 - d + 2 * wt)
    }

    pub fn is_bijection(&self, kind: ArrowType) -> bool {
        let mut hit = vec![false; self.len()];
        for v in 0..self.len() {
            hit[self.arrow(v, kind)] = true;
        }
        hit.into_iter().all(|x| x)
    }

    /// The arrow types along a shortest oriented path from the central vertex,
    /// found by breadth-first search.
    pub fn path_from_central(&self, target: usize) -> Vec<ArrowType> {
        let mut prev: Vec<Option<(usize, ArrowType)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([self.central]);
        seen[self.central] = true;
        while let Some(v) = queue.pop_front() {
            if v == target {
                break;
            }
            for kind in [ArrowType::Top, ArrowType::Bottom] {
                let u = self.arrow(v, kind);
                if !seen[u] {
                    seen[u] = true;
                    prev[u] = Some((v, kind));
                    queue.push_back(u);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = target;
        while let Some((u, kind)) = prev[v] {
            path.push(kind);
            v = u;
        }
        path.reverse();
        path
    }

    /// Vertices of the oriented path from the central vertex that reads `word`.
    fn path_vertices(&self, word: &str) -> Vec<usize> {
        let mut v = self.central;
        let mut out = vec![v];
        for c in word.chars() {
            v = self.arrow(v, if c == 't' { ArrowType::Top } else { ArrowType::Bottom });
            out.push(v);
        }
        out
    }

    /// Cycles of R_t and R_b other than fixed points, each rooted at its
    /// distinguished vertex.
    pub fn elementary_loops(&self) -> Vec<ElementaryLoop> {
        let mut loops = Vec::new();
        for kind in [ArrowType::Top, ArrowType::Bottom] {
            let mut done = vec![false; self.len()];
            for start in 0..self.len() {
                if done[start] {
                    continue;
                }
                let mut cycle = vec![start];
                done[start] = true;
                let mut v = self.arrow(start, kind);
                while v != start {
                    done[v] = true;
                    cycle.push(v);
                    v = self.arrow(v, kind);
                }
                let base_pos = (0..cycle.len())
                    .min_by_key(|&i| (self.words[cycle[i]].len(), i))
                    .unwrap();
                cycle.rotate_left(base_pos);
                let base = cycle[0];
                let winner = match kind {
                    ArrowType::Top => self.winners(base).0,
                    ArrowType::Bottom => self.winners(base).1,
                };
                loops.push(ElementaryLoop {
                    kind,
                    base: self.words[base].clone(),
                    length: cycle.len(),
                    winner,
                    vertices: cycle.iter().map(|&v| self.words[v].clone()).collect(),
                });
            }
        }
        loops
    }

    /// Loops grouped by (type, winner). Distinct loops with the same winner
    /// act by the same twist once conjugated to the central vertex.
    pub fn loop_classes(&self) -> BTreeMap<(ArrowType, i64), Vec<ElementaryLoop>> {
        let mut out: BTreeMap<(ArrowType, i64), Vec<ElementaryLoop>> = BTreeMap::new();
        for l in self.elementary_loops() {
            out.entry((l.kind, l.winner)).or_default().push(l);
        }
        out
    }

    /// Whether the vertex `base` of `lp` is the only vertex of the loop whose
    /// path from the central vertex avoids every arrow of the loop.
    pub fn base_is_distinguished(&self, lp: &ElementaryLoop) -> bool {
        let on_loop: Vec<usize> = lp.vertices.iter().map(|w| self.by_word[w]).collect();
        let uses_loop_arrow = |target: usize| {
            let path = self.path_vertices(&self.words[target]);
            let types: Vec<char> = self.words[target].chars().collect();
            (0..types.len()).any(|i| {
                types[i] == lp.kind.letter() && on_loop.contains(&path[i])
            })
        };
        let clean: Vec<usize> = on_loop.iter().copied().filter(|&v| !uses_loop_arrow(v)).collect();
        clean == [on_loop[0]]
    }

    /// Every arrow agrees with the standard Rauzy–Veech move on the pairs,
    /// and the winner of each arrow is the one read off the word.
    pub fn matches_standard_moves(&self) -> bool {
        (0..self.len()).all(|v| {
            let (wt, wb) = self.winners(v);
            [(ArrowType::Top, wt), (ArrowType::Bottom, wb)]
                .into_iter()
                .all(|(kind, want)| {
                    let (image, winner) = self.vertices[v].rauzy_move(kind);
                    winner == want && self.by_pair.get(&image) == Some(&self.arrow(v, kind))
                })
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph rauzy_{} {{", self.d);
        for (i, w) in self.words.iter().enumerate() {
            let label = if w.is_empty() { "ε" } else { w };
            let _ = writeln!(s, "  v{i} [label=\"{label}\"];");
        }
        for v in 0..self.len() {
            let (wt, wb) = self.winners(v);
            let _ = writeln!(s, "  v{v} -> v{} [label=\"t {wt}\"];", self.r_t[v]);
            let _ = writeln!(s, "  v{v} -> v{} [label=\"b {wb}\"];", self.r_b[v]);
        }
        s.push_str("}\n");
        s
    }
}

/// Checks the conjugation rules relating the arrows of D_d and D_{d+1}
/// through j_t and j_b.
pub fn conjugation_rules_hold(small: &RauzyDiagram, big: &RauzyDiagram) -> bool {
    assert_eq!(small.d + 1, big.d);
    let jt = |v: usize| big.by_pair[&small.vertices[v].j_t()];
    let jb = |v: usize| big.by_pair[&small.vertices[v].j_b()];
    let inv = |map: &[usize]| {
        let mut out = vec![0; map.len()];
        for (i, &j) in map.iter().enumerate() {
            out[j] = i;
        }
        out
    };
    let (rt_inv, rb_inv) = (inv(&small.r_t), inv(&small.r_b));
    let central_small = small.central;
    let mut ok = big.r_t[big.central] == jt(central_small) && big.r_b[big.central] == jb(central_small);
    for v in 0..small.len() {
        ok &= big.r_t[jb(rt_inv[v])] == jb(v);
        ok &= big.r_b[jt(rb_inv[v])] == jt(v);
        if v != central_small {
            ok &= big.r_t[jt(rt_inv[v])] == jt(v);
            ok &= big.r_b[jb(rb_inv[v])] == jb(v);
        } else {
            ok &= big.r_t[jt(rt_inv[v])] == big.central;
            ok &= big.r_b[jb(rb_inv[v])] == big.central;
        }
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_counts() {
        assert_eq!(build_diagram(2).unwrap().len(), 1);
        assert_eq!(build_diagram(3).unwrap().len(), 3);
        let d6 = build_diagram(6).unwrap();
        assert_eq!(d6.len(), 31);
        assert!(d6.is_bijection(ArrowType::Top) && d6.is_bijection(ArrowType::Bottom));
        assert!(build_diagram(1).is_err());
    }

    #[test]
    fn d2_is_two_self_loops() {
        let g = build_diagram(2).unwrap();
        assert_eq!((g.r_t[0], g.r_b[0]), (0, 0));
        let loops = g.elementary_loops();
        assert_eq!(loops.len(), 2);
        assert!(loops.iter().all(|l| l.length == 1 && l.base.is_empty()));
    }

    #[test]
    fn words() {
        let g = build_diagram(4).unwrap();
        assert_eq!(g.word_of(&PermutationPair::central(4)).unwrap(), "");
        assert_eq!(g.word_of(&PermutationPair::central(3).j_t()).unwrap(), "t");
        let v = PermutationPair::central(2).j_t().j_b();
        assert_eq!(g.word_of(&v).unwrap(), "bt");
        assert!(g.word_of(&PermutationPair::central(3)).is_err());
    }

    #[test]
    fn winner_examples() {
        let g = build_diagram(4).unwrap();
        assert_eq!(g.winners(g.central), (3, -3));
        assert_eq!(g.winners(g.index_of_word("b").unwrap()).0, 1);
        assert_eq!(g.winners(g.index_of_word("tt").unwrap()).1, 1);
        for v in 0..g.len() {
            let (a, b) = g.winners(v);
            assert!(a > b);
        }
    }

    #[test]
    fn d3_loops() {
        let g = build_diagram(3).unwrap();
        let mut top: Vec<(usize, String)> = g
            .elementary_loops()
            .into_iter()
            .filter(|l| l.kind == ArrowType::Top)
            .map(|l| (l.length, l.base))
            .collect();
        top.sort();
        assert_eq!(top, vec![(1, "b".to_string()), (2, String::new())]);
    }

    #[test]
    fn loops_and_paths() {
        for d in 2..=7 {
            let g = build_diagram(d).unwrap();
            let loops = g.elementary_loops();
            // every vertex lies on exactly one cycle of each type
            assert_eq!(loops.len(), 1 << (d - 1));
            assert_eq!(g.loop_classes().len(), 2 * (d - 1));
            for kind in [ArrowType::Top, ArrowType::Bottom] {
                let mut winners: Vec<i64> = loops.iter().filter(|l| l.kind == kind).map(|l| l.winner).collect();
                winners.sort();
                winners.dedup();
                assert_eq!(winners, letters(d).iter().copied().filter(|&p| match kind {
                    ArrowType::Top => p > 1 - d as i64,
                    ArrowType::Bottom => p < d as i64 - 1,
                }).collect::<Vec<_>>());
            }
            for l in &loops {
                assert_eq!(l.length + l.base.len(), d - 1);
                assert!(g.base_is_distinguished(l), "d={d} {l:?}");
                for w in &l.vertices {
                    let v = g.index_of_word(w).unwrap();
                    let win = match l.kind {
                        ArrowType::Top => g.winners(v).0,
                        ArrowType::Bottom => g.winners(v).1,
                    };
                    assert_eq!(win, l.winner);
                }
            }
            for v in 0..g.len() {
                let path: String = g.path_from_central(v).iter().map(|k| k.letter()).collect();
                assert_eq!(path, g.words[v]);
            }
        }
    }

    #[test]
    fn standard_move_oracle() {
        for d in 2..=8 {
            let g = build_diagram(d).unwrap();
            assert!(g.vertices.iter().all(PermutationPair::is_valid));
            assert!(g.matches_standard_moves(), "d={d}");
        }
    }

    #[test]
    fn conjugation_rules() {
        for d in 2..=7 {
            let (a, b) = (build_diagram(d).unwrap(), build_diagram(d + 1).unwrap());
            assert!(conjugation_rules_hold(&a, &b), "d={d}");
        }
    }

    #[test]
    fn dot_has_expected_shape() {
        let dot = build_diagram(3).unwrap().to_dot();
        assert_eq!(dot.matches("[label=\"t ").count() + dot.matches("[label=\"b ").count(), 6);
        assert_eq!(dot.lines().filter(|l| l.contains("[label=\"") && !l.contains("->")).count(), 3);
    }
}
