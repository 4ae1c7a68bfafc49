//! Reference computations that share no code with the library beyond the
//! `Digraph` container.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use wdrd_core::Digraph;

pub const INF: u32 = u32::MAX;

/// All-pairs distances by Floyd–Warshall.
pub fn floyd(d: &Digraph) -> Vec<Vec<u32>> {
    let n = d.n();
    let mut m = vec![vec![INF; n]; n];
    for (x, row) in m.iter_mut().enumerate() {
        row[x] = 0;
        for y in 0..n {
            if d.has_arc(x, y) {
                row[y] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] != INF && m[k][j] != INF && m[i][k] + m[k][j] < m[i][j] {
                    m[i][j] = m[i][k] + m[k][j];
                }
            }
        }
    }
    m
}

pub fn circulant(m: usize, set: &[usize]) -> Digraph {
    Digraph::from_fn(m, |x, y| set.contains(&((y + m - x) % m)))
}

/// `e`-subsets of `{0..n-1}` in lexicographic order of their element lists.
pub fn subsets(n: usize, e: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, e: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == e {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            go(a + 1, n, e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, e, &mut Vec::new(), &mut out);
    out
}

fn meet(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

pub fn johnson_graph(n: usize, e: usize) -> Digraph {
    let s = subsets(n, e);
    Digraph::from_fn(s.len(), |u, v| meet(&s[u], &s[v]) == e - 1)
}

/// Graph with the two-way distance classes of `d`, as a labelling of pairs.
pub struct Classes {
    pub n: usize,
    pub dist: Vec<Vec<u32>>,
}

impl Classes {
    pub fn of(d: &Digraph) -> Self {
        Classes { n: d.n(), dist: floyd(d) }
    }

    pub fn label(&self, x: usize, y: usize) -> (u32, u32) {
        (self.dist[x][y], self.dist[y][x])
    }

    pub fn labels(&self) -> BTreeSet<(u32, u32)> {
        (0..self.n).flat_map(|x| (0..self.n).map(move |y| (x, y))).map(|(x, y)| self.label(x, y)).collect()
    }

    /// `|{z : label(x,z) = i, label(z,y) = j}|` for the first pair `(x,y)` with
    /// label `l`, after checking that every such pair gives the same count.
    pub fn p(&self, i: (u32, u32), j: (u32, u32), l: (u32, u32)) -> u32 {
        let mut value = None;
        for x in 0..self.n {
            for y in 0..self.n {
                if self.label(x, y) != l {
                    continue;
                }
                let c = (0..self.n).filter(|&z| self.label(x, z) == i && self.label(z, y) == j).count() as u32;
                match value {
                    None => value = Some(c),
                    Some(v) => assert_eq!(v, c, "count not constant on class {l:?}"),
                }
            }
        }
        value.unwrap_or_else(|| panic!("no pair of class {l:?}"))
    }

    pub fn valency(&self, i: (u32, u32)) -> u32 {
        (0..self.n).filter(|&y| self.label(0, y) == i).count() as u32
    }

    pub fn type_set(&self) -> BTreeSet<u32> {
        self.labels().into_iter().filter(|l| l.0 == 1).map(|l| l.1 + 1).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let ls: Vec<_> = self.labels().into_iter().collect();
        ls.iter().all(|&i| ls.iter().all(|&j| ls.iter().all(|&l| self.p(i, j, l) == self.p(j, i, l))))
    }
}

/// Isomorphism by trying every permutation. Only for tiny digraphs.
pub fn isomorphic_brute(a: &Digraph, b: &Digraph) -> bool {
    let n = a.n();
    if n != b.n() || a.arc_count() != b.arc_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|u| (0..n).all(|v| a.has_arc(u, v) == b.has_arc(perm[u], perm[v]))) {
            return true;
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return false;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Intersection array `(b, c)` of a distance-regular graph straight from the
/// definition.
pub fn drg_array(g: &Digraph) -> (Vec<u64>, Vec<u64>) {
    let dist = floyd(g);
    let n = g.n();
    let diameter = dist.iter().flatten().copied().max().unwrap() as usize;
    let mut b = vec![None; diameter + 1];
    let mut c = vec![None; diameter + 1];
    for x in 0..n {
        for y in 0..n {
            let i = dist[x][y] as usize;
            let count = |k: usize| (0..n).filter(|&z| g.has_arc(y, z) && dist[x][z] as usize == k).count() as u64;
            let bi = if i < diameter { count(i + 1) } else { 0 };
            let ci = if i > 0 { count(i - 1) } else { 0 };
            assert!(*b[i].get_or_insert(bi) == bi && *c[i].get_or_insert(ci) == ci, "not distance-regular");
        }
    }
    (
        b[..diameter].iter().map(|v| v.unwrap()).collect(),
        c[1..].iter().map(|v| v.unwrap()).collect(),
    )
}
