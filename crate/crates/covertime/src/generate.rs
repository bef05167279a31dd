//! Synthetic graph generators.
//!
//! Deterministic families (complete, star, hypercube, lollipop, 3-d mesh)
//! plus two seeded random families: geometric graphs on the unit square and
//! preferential-attachment graphs with a right-skewed degree distribution.
//! Every generator returns a connected simple [`Graph`]; random generators
//! are bit-reproducible for a fixed seed.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::rng_from;

/// A generator request, parseable from the CLI form `name:args`.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    /// `complete:n` — every pair of the `n` nodes adjacent.
    Complete {
        /// Node count.
        n: u32,
    },
    /// `star:n` — node 0 adjacent to the other `n − 1` nodes.
    Star {
        /// Node count including the center.
        n: u32,
    },
    /// `path:n` — the nodes `0..n` chained in order.
    Path {
        /// Node count.
        n: u32,
    },
    /// `hypercube:dim` — binary hypercube on `2^dim` nodes.
    Hypercube {
        /// Dimension; node count is `2^dim`.
        dim: u32,
    },
    /// `lollipop:clique_n,path_len` — a clique with a path glued to it.
    Lollipop {
        /// Clique size.
        clique_n: u32,
        /// Nodes in the attached path.
        path_len: u32,
    },
    /// `mesh3d:a,b,c` — 3-dimensional grid with 6-neighborhoods.
    Mesh3d {
        /// Extent along the first axis.
        a: u32,
        /// Extent along the second axis.
        b: u32,
        /// Extent along the third axis.
        c: u32,
    },
    /// `geometric:n,radius,seed` — random points in the unit square,
    /// connected when within `radius`; the radius grows until the graph is
    /// connected.
    RandomGeometric {
        /// Node count.
        n: u32,
        /// Initial connection radius.
        radius: f64,
        /// Point-placement seed.
        seed: u64,
    },
    /// `ba:n,attach_k,seed` — preferential attachment; each new node
    /// attaches to `attach_k` distinct existing nodes.
    BarabasiAlbert {
        /// Node count.
        n: u32,
        /// Edges added per new node.
        attach_k: u32,
        /// Attachment seed.
        seed: u64,
    },
}

impl GraphKind {
    /// Parses the `name:args` CLI form, e.g. `ba:5000,2,42`.
    pub fn parse(text: &str) -> Result<Self> {
        let invalid = |expected: &'static str| Error::InvalidParameter {
            name: "gen",
            value: text.to_string(),
            expected,
        };
        let (name, args) = match text.split_once(':') {
            Some((n, a)) => (n, a),
            None => (text, ""),
        };
        let nums: Vec<&str> =
            args.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let int = |s: &str| s.parse::<u32>().map_err(|_| invalid("an integer argument"));
        let long = |s: &str| s.parse::<u64>().map_err(|_| invalid("an integer seed"));
        let real = |s: &str| s.parse::<f64>().map_err(|_| invalid("a real argument"));
        match (name, nums.as_slice()) {
            ("complete", [n]) => Ok(Self::Complete { n: int(n)? }),
            ("star", [n]) => Ok(Self::Star { n: int(n)? }),
            ("path", [n]) => Ok(Self::Path { n: int(n)? }),
            ("hypercube", [d]) => Ok(Self::Hypercube { dim: int(d)? }),
            ("lollipop", [c, p]) => {
                Ok(Self::Lollipop { clique_n: int(c)?, path_len: int(p)? })
            }
            ("mesh3d", [a, b, c]) => {
                Ok(Self::Mesh3d { a: int(a)?, b: int(b)?, c: int(c)? })
            }
            ("geometric", [n, r, s]) => Ok(Self::RandomGeometric {
                n: int(n)?,
                radius: real(r)?,
                seed: long(s)?,
            }),
            ("ba", [n, k, s]) => Ok(Self::BarabasiAlbert {
                n: int(n)?,
                attach_k: int(k)?,
                seed: long(s)?,
            }),
            _ => Err(invalid(
                "complete:n | star:n | path:n | hypercube:dim | lollipop:c,p | \
                 mesh3d:a,b,c | geometric:n,radius,seed | ba:n,k,seed",
            )),
        }
    }

    /// Builds the graph. For [`GraphKind::RandomGeometric`] the returned
    /// note reports the final (possibly grown) connection radius.
    pub fn build(&self) -> Result<(Graph, Option<String>)> {
        match *self {
            Self::Complete { n } => Ok((complete(n)?, None)),
            Self::Star { n } => Ok((star(n)?, None)),
            Self::Path { n } => Ok((path(n)?, None)),
            Self::Hypercube { dim } => Ok((hypercube(dim)?, None)),
            Self::Lollipop { clique_n, path_len } => {
                Ok((lollipop(clique_n, path_len)?, None))
            }
            Self::Mesh3d { a, b, c } => Ok((mesh3d(a, b, c)?, None)),
            Self::RandomGeometric { n, radius, seed } => {
                let (g, final_radius) = random_geometric(n, radius, seed)?;
                let note = (final_radius != radius)
                    .then(|| format!("radius grown to {final_radius:.6} for connectivity"));
                Ok((g, note))
            }
            Self::BarabasiAlbert { n, attach_k, seed } => {
                Ok((barabasi_albert(n, attach_k, seed)?, None))
            }
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Self::Complete { n } => write!(f, "complete:{n}"),
            Self::Star { n } => write!(f, "star:{n}"),
            Self::Path { n } => write!(f, "path:{n}"),
            Self::Hypercube { dim } => write!(f, "hypercube:{dim}"),
            Self::Lollipop { clique_n, path_len } => {
                write!(f, "lollipop:{clique_n},{path_len}")
            }
            Self::Mesh3d { a, b, c } => write!(f, "mesh3d:{a},{b},{c}"),
            Self::RandomGeometric { n, radius, seed } => {
                write!(f, "geometric:{n},{radius},{seed}")
            }
            Self::BarabasiAlbert { n, attach_k, seed } => {
                write!(f, "ba:{n},{attach_k},{seed}")
            }
        }
    }
}

fn require(cond: bool, name: &'static str, value: impl ToString, expected: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value: value.to_string(), expected })
    }
}

/// Complete graph on `n ≥ 2` nodes.
pub fn complete(n: u32) -> Result<Graph> {
    require(n >= 2, "n", n, "n >= 2")?;
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(edges)
}

/// Star: node 0 is the center, nodes `1..n` are leaves. `n ≥ 2`.
pub fn star(n: u32) -> Result<Graph> {
    require(n >= 2, "n", n, "n >= 2")?;
    Graph::from_edges((1..n).map(|v| (0, v)))
}

/// Path on `n ≥ 2` nodes: `0 – 1 – … – n−1`.
pub fn path(n: u32) -> Result<Graph> {
    require(n >= 2, "n", n, "n >= 2")?;
    Graph::from_edges((0..n - 1).map(|v| (v, v + 1)))
}

/// Binary hypercube of dimension `dim ≥ 1`: nodes are bit patterns,
/// adjacent when they differ in exactly one bit.
pub fn hypercube(dim: u32) -> Result<Graph> {
    require((1..=20).contains(&dim), "dim", dim, "1 <= dim <= 20")?;
    let n: u32 = 1 << dim;
    let edges = (0..n).flat_map(move |v| {
        (0..dim).filter_map(move |b| {
            let w = v ^ (1 << b);
            (v < w).then_some((v, w))
        })
    });
    Graph::from_edges(edges)
}

/// Lollipop: a complete graph on `clique_n ≥ 2` nodes with a path of
/// `path_len ≥ 1` extra nodes attached to clique node `clique_n − 1`.
pub fn lollipop(clique_n: u32, path_len: u32) -> Result<Graph> {
    require(clique_n >= 2, "clique_n", clique_n, "clique_n >= 2")?;
    require(path_len >= 1, "path_len", path_len, "path_len >= 1")?;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for u in 0..clique_n {
        for v in u + 1..clique_n {
            edges.push((u, v));
        }
    }
    edges.push((clique_n - 1, clique_n));
    for i in 0..path_len - 1 {
        edges.push((clique_n + i, clique_n + i + 1));
    }
    Graph::from_edges(edges)
}

/// 3-dimensional mesh of `a × b × c ≥ 2` nodes with axis-aligned edges.
pub fn mesh3d(a: u32, b: u32, c: u32) -> Result<Graph> {
    require(a >= 1 && b >= 1 && c >= 1, "a,b,c", format!("{a},{b},{c}"), "all >= 1")?;
    let nodes = a as u64 * b as u64 * c as u64;
    require(nodes >= 2, "a*b*c", nodes, "at least 2 nodes")?;
    require(nodes <= u32::MAX as u64, "a*b*c", nodes, "at most 2^32 - 1 nodes")?;
    let id = |x: u32, y: u32, z: u32| x + a * (y + b * z);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for z in 0..c {
        for y in 0..b {
            for x in 0..a {
                if x + 1 < a {
                    edges.push((id(x, y, z), id(x + 1, y, z)));
                }
                if y + 1 < b {
                    edges.push((id(x, y, z), id(x, y + 1, z)));
                }
                if z + 1 < c {
                    edges.push((id(x, y, z), id(x, y, z + 1)));
                }
            }
        }
    }
    Graph::from_edges(edges)
}

/// Random geometric graph: `n ≥ 2` points uniform in the unit square,
/// edges between pairs within Euclidean distance `radius`.
///
/// If the threshold graph is disconnected the radius is grown by 10%
/// (points fixed) until it connects; `sqrt(2)` always terminates the
/// search. Returns the graph and the final radius.
pub fn random_geometric(n: u32, radius: f64, seed: u64) -> Result<(Graph, f64)> {
    require(n >= 2, "n", n, "n >= 2")?;
    require(
        radius.is_finite() && radius > 0.0,
        "radius",
        radius,
        "a positive real",
    )?;
    let mut rng = rng_from(seed);
    let points: Vec<(f64, f64)> =
        (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let mut r = radius;
    loop {
        let r2 = r * r;
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for u in 0..n as usize {
            for v in u + 1..n as usize {
                let dx = points[u].0 - points[v].0;
                let dy = points[u].1 - points[v].1;
                if dx * dx + dy * dy <= r2 {
                    edges.push((u as NodeId, v as NodeId));
                }
            }
        }
        if spans_all(n, &edges) {
            let g = Graph::from_edges(edges)?;
            return Ok((g, r));
        }
        r = (r * 1.1).min(std::f64::consts::SQRT_2);
    }
}

/// Preferential attachment on `n` nodes: starts from a complete graph on
/// `attach_k + 1` nodes; each later node attaches to `attach_k` distinct
/// existing nodes drawn with probability proportional to current degree.
///
/// Requires `1 ≤ attach_k` and `n ≥ attach_k + 1`.
pub fn barabasi_albert(n: u32, attach_k: u32, seed: u64) -> Result<Graph> {
    require(attach_k >= 1, "attach_k", attach_k, "attach_k >= 1")?;
    require(n > attach_k, "n", n, "n >= attach_k + 1")?;
    let core = attach_k + 1;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    // Each endpoint appears here once per incident edge, making a uniform
    // draw from the list a degree-proportional draw of nodes.
    let mut endpoints: Vec<NodeId> = Vec::new();
    for u in 0..core {
        for v in u + 1..core {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut rng = rng_from(seed);
    let mut chosen: Vec<NodeId> = Vec::with_capacity(attach_k as usize);
    for v in core..n {
        chosen.clear();
        while chosen.len() < attach_k as usize {
            let pick = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&pick) {
                chosen.push(pick);
            }
        }
        for &u in &chosen {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    Graph::from_edges(edges)
}

/// True when `edges` connect all `n` nodes (union-find).
fn spans_all(n: u32, edges: &[(NodeId, NodeId)]) -> bool {
    let mut parent: Vec<u32> = (0..n).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    let mut components = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv) as usize] = ru.min(rv);
            components -= 1;
        }
    }
    components == 1
}
