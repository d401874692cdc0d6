//! Backtracking search for colorings of `[N]` without monochromatic
//! solutions.

use serde::{Deserialize, Serialize};

use crate::counting::{enumerate_solutions, is_pairwise_distinct, DiagonalSystem};
use crate::error::{Error, Result};

/// Which solutions have to avoid being monochromatic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SolutionFilter {
    /// Pairwise distinct coordinates.
    PairwiseDistinct,
    /// Every solution except the constant ones `x_1 = ... = x_s`.
    #[default]
    NonConstant,
    All,
}

impl SolutionFilter {
    pub fn admits(self, x: &[u64]) -> bool {
        match self {
            SolutionFilter::PairwiseDistinct => is_pairwise_distinct(x),
            SolutionFilter::NonConstant => x.windows(2).any(|w| w[0] != w[1]),
            SolutionFilter::All => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    #[serde(rename = "N")]
    pub n: u64,
    pub r: u32,
    /// `colors[i]` is the color of `i + 1`, in `0..r`.
    #[serde(with = "run_length")]
    pub colors: Vec<u32>,
}

impl Coloring {
    pub fn color(&self, x: u64) -> u32 {
        self.colors[(x - 1) as usize]
    }

    /// Color classes as sorted lists.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.r as usize];
        for (i, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(i as u64 + 1);
        }
        out
    }

    pub fn to_run_length(&self) -> String {
        run_length::encode(&self.colors)
    }
}

/// `"0^2 1^3"` means colors `0, 0, 1, 1, 1`.
pub mod run_length {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn encode(colors: &[u32]) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < colors.len() {
            let j = (i..colors.len()).find(|&j| colors[j] != colors[i]).unwrap_or(colors.len());
            parts.push(format!("{}^{}", colors[i], j - i));
            i = j;
        }
        parts.join(" ")
    }

    pub fn decode(s: &str) -> Result<Vec<u32>, String> {
        let mut out = Vec::new();
        for part in s.split_whitespace() {
            let (c, n) = part.split_once('^').ok_or_else(|| format!("bad run {part:?}"))?;
            let c: u32 = c.parse().map_err(|_| format!("bad color in {part:?}"))?;
            let n: usize = n.parse().map_err(|_| format!("bad length in {part:?}"))?;
            out.extend(std::iter::repeat_n(c, n));
        }
        Ok(out)
    }

    pub fn serialize<S: Serializer>(v: &[u32], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&encode(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u32>, D::Error> {
        decode(&String::deserialize(d)?).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ColoringOptions {
    pub filter: SolutionFilter,
    pub node_budget: u64,
    pub solution_limit: usize,
}

impl Default for ColoringOptions {
    fn default() -> Self {
        ColoringOptions { filter: SolutionFilter::default(), node_budget: 50_000_000, solution_limit: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSearch {
    pub coloring: Option<Coloring>,
    pub nodes: u64,
    /// Distinct value sets of the admitted solutions.
    pub hyperedges: usize,
}

/// Distinct value sets of admitted solutions, sorted.
pub fn solution_hyperedges(sys: &DiagonalSystem, n: u64, opts: &ColoringOptions) -> Result<Vec<Vec<u64>>> {
    let mut edges: Vec<Vec<u64>> = enumerate_solutions(sys, n, None, opts.solution_limit)?
        .into_iter()
        .filter(|x| opts.filter.admits(x))
        .map(|mut x| {
            x.sort_unstable();
            x.dedup();
            x
        })
        .collect();
    edges.sort();
    edges.dedup();
    Ok(edges)
}

/// True when no admitted solution over `[N]` is monochromatic.
pub fn coloring_is_valid(sys: &DiagonalSystem, c: &Coloring, filter: SolutionFilter) -> Result<bool> {
    let opts = ColoringOptions { filter, ..Default::default() };
    Ok(solution_hyperedges(sys, c.n, &opts)?
        .iter()
        .all(|e| e.iter().any(|&x| c.color(x) != c.color(e[0]))))
}

struct Search<'a> {
    r: u32,
    // hyperedges indexed by their largest element
    closing: &'a [Vec<Vec<u64>>],
    colors: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, x: usize, used: u32) -> Result<bool> {
        if x == self.colors.len() {
            return Ok(true);
        }
        let top = if x == 0 { 1 } else { (used + 1).min(self.r) };
        for c in 0..top {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded(self.budget));
            }
            self.colors[x] = c;
            let clash = self.closing[x]
                .iter()
                .any(|e| e.iter().all(|&v| self.colors[(v - 1) as usize] == c));
            if !clash && self.run(x + 1, used.max(c + 1))? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Depth first search over colorings of `1..=N` with `1` colored `0` and
/// each new color at most one more than the largest used so far.
pub fn find_bad_coloring_with(sys: &DiagonalSystem, n: u64, r: u32, opts: ColoringOptions) -> Result<ColoringSearch> {
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one color".into()));
    }
    let edges = if n == 0 { Vec::new() } else { solution_hyperedges(sys, n, &opts)? };
    let mut closing = vec![Vec::new(); n as usize];
    for e in &edges {
        closing[(e[e.len() - 1] - 1) as usize].push(e.clone());
    }
    let mut search = Search { r, closing: &closing, colors: vec![0; n as usize], nodes: 0, budget: opts.node_budget };
    let found = search.run(0, 0)?;
    let coloring = found.then(|| Coloring { n, r, colors: search.colors.clone() });
    Ok(ColoringSearch { coloring, nodes: search.nodes, hyperedges: edges.len() })
}

pub fn find_bad_coloring(sys: &DiagonalSystem, n: u64, r: u32) -> Result<Option<Coloring>> {
    Ok(find_bad_coloring_with(sys, n, r, ColoringOptions::default())?.coloring)
}
