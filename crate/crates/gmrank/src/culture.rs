//! Annotated person-list analytics across encyclopedia editions.
//!
//! Input is a TSV of top-ranked person lists, one list per (edition,
//! ranking algorithm) pair, each person carrying an activity field and a
//! culture label. From these lists the module derives activity
//! distributions, cross-edition overlap, local heroes, a global-hero
//! ranking score, and a small weighted "network of cultures" that is then
//! run through the same Google-matrix machinery as the big graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

use crate::gmatrix::{self, DenseGoogle, GmatrixError, RankKind, RankVector};
use crate::graph::{DirectedGraph, NodeId};
use crate::ranking::{rank_index, RankIndex};

/// Human-activity field of a person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Activity {
    Politics,
    Science,
    Art,
    Religion,
    Sport,
    Etc,
}

impl Activity {
    pub const ALL: [Activity; 6] = [
        Activity::Politics,
        Activity::Science,
        Activity::Art,
        Activity::Religion,
        Activity::Sport,
        Activity::Etc,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&a| a == self).unwrap()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Activity::Politics => "politics",
            Activity::Science => "science",
            Activity::Art => "art",
            Activity::Religion => "religion",
            Activity::Sport => "sport",
            Activity::Etc => "etc",
        }
    }
}

impl FromStr for Activity {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Activity::ALL
            .iter()
            .copied()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

/// Culture label: the nine edition languages plus the remaining world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Culture {
    En,
    Fr,
    De,
    It,
    Es,
    Nl,
    Ru,
    Hu,
    Ko,
    Wr,
}

impl Culture {
    pub const ALL: [Culture; 10] = [
        Culture::En,
        Culture::Fr,
        Culture::De,
        Culture::It,
        Culture::Es,
        Culture::Nl,
        Culture::Ru,
        Culture::Hu,
        Culture::Ko,
        Culture::Wr,
    ];

    /// The nine labels that can appear as editions (everything but WR).
    pub const EDITIONS: [Culture; 9] = [
        Culture::En,
        Culture::Fr,
        Culture::De,
        Culture::It,
        Culture::Es,
        Culture::Nl,
        Culture::Ru,
        Culture::Hu,
        Culture::Ko,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }

    pub fn code(self) -> &'static str {
        match self {
            Culture::En => "EN",
            Culture::Fr => "FR",
            Culture::De => "DE",
            Culture::It => "IT",
            Culture::Es => "ES",
            Culture::Nl => "NL",
            Culture::Ru => "RU",
            Culture::Hu => "HU",
            Culture::Ko => "KO",
            Culture::Wr => "WR",
        }
    }
}

impl FromStr for Culture {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Culture::ALL
            .iter()
            .copied()
            .find(|c| c.code().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

impl std::fmt::Display for Culture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Ranking algorithm a person list was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    PageRank,
    CheiRank,
    TwoDRank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::PageRank, Algorithm::CheiRank, Algorithm::TwoDRank];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::PageRank => "PageRank",
            Algorithm::CheiRank => "CheiRank",
            Algorithm::TwoDRank => "2DRank",
        }
    }
}

impl FromStr for Algorithm {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "pagerank" => Ok(Algorithm::PageRank),
            "cheirank" => Ok(Algorithm::CheiRank),
            "2drank" | "twodrank" => Ok(Algorithm::TwoDRank),
            _ => Err(()),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One annotated person: canonical English name, activity field, culture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersonAnnotation {
    pub name: String,
    pub activity: Activity,
    pub culture: Culture,
}

/// A ranked person list from one edition and one algorithm. Entries carry
/// the local rank R = 1..L without gaps.
#[derive(Debug, Clone)]
pub struct TopPersonList {
    pub edition: Culture,
    pub algorithm: Algorithm,
    entries: Vec<(u32, PersonAnnotation)>,
}

impl TopPersonList {
    /// List length L.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u32, PersonAnnotation)] {
        &self.entries
    }

    /// A person is local when their culture matches the edition.
    pub fn is_local(&self, person: &PersonAnnotation) -> bool {
        person.culture == self.edition
    }

    pub fn local_count(&self) -> usize {
        self.entries.iter().filter(|(_, p)| self.is_local(p)).count()
    }
}

/// All loaded lists, indexed by (edition, algorithm).
#[derive(Debug, Clone, Default)]
pub struct PersonTables {
    lists: Vec<TopPersonList>,
}

impl PersonTables {
    pub fn lists(&self) -> &[TopPersonList] {
        &self.lists
    }

    pub fn get(&self, edition: Culture, algorithm: Algorithm) -> Option<&TopPersonList> {
        self.lists
            .iter()
            .find(|l| l.edition == edition && l.algorithm == algorithm)
    }

    /// Lists for one algorithm, in canonical edition order.
    pub fn for_algorithm(&self, algorithm: Algorithm) -> Vec<&TopPersonList> {
        self.lists
            .iter()
            .filter(|l| l.algorithm == algorithm)
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum CultureError {
    #[error("validation error: missing header line (expected one starting with 'edition')")]
    MissingHeader,
    #[error("validation error: line {line}: expected 6 tab-separated columns, found {found}")]
    BadColumnCount { line: usize, found: usize },
    #[error("validation error: line {line}: unknown edition '{token}'")]
    UnknownEdition { line: usize, token: String },
    #[error("validation error: line {line}: WR is the residual world culture, not an edition")]
    WorldEdition { line: usize },
    #[error("validation error: line {line}: unknown algorithm '{token}'")]
    UnknownAlgorithm { line: usize, token: String },
    #[error("validation error: line {line}: invalid rank '{token}'")]
    BadRank { line: usize, token: String },
    #[error("validation error: line {line}: unknown activity '{token}'")]
    UnknownActivity { line: usize, token: String },
    #[error("validation error: line {line}: unknown culture '{token}'")]
    UnknownCulture { line: usize, token: String },
    #[error("validation error: line {line}: empty person name")]
    EmptyName { line: usize },
    #[error("validation error: duplicate rank {rank} in list ({edition}, {algorithm})")]
    DuplicateRank {
        edition: Culture,
        algorithm: Algorithm,
        rank: u32,
    },
    #[error(
        "validation error: list ({edition}, {algorithm}) has rank {found} where {expected} was expected"
    )]
    RankGap {
        edition: Culture,
        algorithm: Algorithm,
        expected: u32,
        found: u32,
    },
    #[error("no person lists loaded for {algorithm}")]
    MissingLists { algorithm: Algorithm },
    #[error("no {algorithm} list for edition {edition}")]
    MissingList {
        edition: Culture,
        algorithm: Algorithm,
    },
    #[error("overlap needs at least 2 edition lists, found {found}")]
    NotEnoughEditions { found: usize },
    #[error("culture network has no links at all")]
    DegenerateNetwork,
    #[error("contribution statistics need a non-empty target set")]
    EmptyTargets,
    #[error("no target has any incoming link")]
    NoIncomingLinks,
    #[error("rank vector covers {got} nodes but the graph has {expected}")]
    VectorGraphMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Rank(#[from] GmatrixError),
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses annotated person lists from a TSV stream.
///
/// Format: a header line, then one line per person:
/// `edition<TAB>algorithm<TAB>rank<TAB>name<TAB>activity<TAB>culture`.
/// Lines starting with `#` and blank lines are skipped. Every list must
/// have contiguous ranks 1..L.
pub fn load_annotations<R: BufRead>(reader: R) -> Result<PersonTables, CultureError> {
    let mut groups: BTreeMap<(usize, Algorithm), Vec<(u32, PersonAnnotation)>> = BTreeMap::new();
    let mut seen: BTreeSet<(usize, Algorithm, u32)> = BTreeSet::new();
    let mut header_seen = false;

    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = line_no + 1;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            let first = trimmed.split('\t').next().unwrap_or("");
            if !first.trim().eq_ignore_ascii_case("edition") {
                return Err(CultureError::MissingHeader);
            }
            header_seen = true;
            continue;
        }

        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 6 {
            return Err(CultureError::BadColumnCount {
                line: line_no,
                found: fields.len(),
            });
        }
        let edition = Culture::from_str(fields[0].trim()).map_err(|_| {
            CultureError::UnknownEdition {
                line: line_no,
                token: fields[0].trim().to_string(),
            }
        })?;
        if edition == Culture::Wr {
            return Err(CultureError::WorldEdition { line: line_no });
        }
        let algorithm = Algorithm::from_str(fields[1].trim()).map_err(|_| {
            CultureError::UnknownAlgorithm {
                line: line_no,
                token: fields[1].trim().to_string(),
            }
        })?;
        let rank: u32 = fields[2].trim().parse().ok().filter(|&r| r >= 1).ok_or(
            CultureError::BadRank {
                line: line_no,
                token: fields[2].trim().to_string(),
            },
        )?;
        let name = fields[3].trim();
        if name.is_empty() {
            return Err(CultureError::EmptyName { line: line_no });
        }
        let activity = Activity::from_str(fields[4].trim()).map_err(|_| {
            CultureError::UnknownActivity {
                line: line_no,
                token: fields[4].trim().to_string(),
            }
        })?;
        let culture = Culture::from_str(fields[5].trim()).map_err(|_| {
            CultureError::UnknownCulture {
                line: line_no,
                token: fields[5].trim().to_string(),
            }
        })?;

        if !seen.insert((edition.index(), algorithm, rank)) {
            return Err(CultureError::DuplicateRank {
                edition,
                algorithm,
                rank,
            });
        }
        groups.entry((edition.index(), algorithm)).or_default().push((
            rank,
            PersonAnnotation {
                name: name.to_string(),
                activity,
                culture,
            },
        ));
    }

    if !header_seen {
        return Err(CultureError::MissingHeader);
    }

    let mut lists = Vec::new();
    for ((edition_idx, algorithm), mut entries) in groups {
        entries.sort_by_key(|(r, _)| *r);
        let edition = Culture::ALL[edition_idx];
        for (i, (rank, _)) in entries.iter().enumerate() {
            let expected = i as u32 + 1;
            if *rank != expected {
                return Err(CultureError::RankGap {
                    edition,
                    algorithm,
                    expected,
                    found: *rank,
                });
            }
        }
        lists.push(TopPersonList {
            edition,
            algorithm,
            entries,
        });
    }
    Ok(PersonTables { lists })
}

/// Per-edition percentage distribution of a list over the six activities,
/// in canonical edition order. Editions with no list for the algorithm are
/// simply absent from the result; an empty result is an error.
pub fn activity_distribution(
    tables: &PersonTables,
    algorithm: Algorithm,
) -> Result<Vec<(Culture, [f64; 6])>, CultureError> {
    let lists = tables.for_algorithm(algorithm);
    if lists.is_empty() {
        return Err(CultureError::MissingLists { algorithm });
    }
    let mut out = Vec::with_capacity(lists.len());
    for list in lists {
        let mut counts = [0usize; 6];
        for (_, person) in list.entries() {
            counts[person.activity.index()] += 1;
        }
        let total = list.len() as f64;
        let mut pct = [0.0; 6];
        for (i, c) in counts.iter().enumerate() {
            pct[i] = 100.0 * *c as f64 / total;
        }
        out.push((list.edition, pct));
    }
    out.sort_by_key(|(e, _)| e.index());
    Ok(out)
}

/// Percentage of distinct persons (matched by exact name) that appear in
/// more than one edition's list for the given algorithm.
pub fn overlap_fraction(tables: &PersonTables, algorithm: Algorithm) -> Result<f64, CultureError> {
    let lists = tables.for_algorithm(algorithm);
    if lists.len() < 2 {
        return Err(CultureError::NotEnoughEditions { found: lists.len() });
    }
    let mut editions_per_person: HashMap<&str, BTreeSet<usize>> = HashMap::new();
    for list in &lists {
        for (_, person) in list.entries() {
            editions_per_person
                .entry(person.name.as_str())
                .or_default()
                .insert(list.edition.index());
        }
    }
    let total = editions_per_person.len();
    let overlapping = editions_per_person.values().filter(|e| e.len() >= 2).count();
    Ok(100.0 * overlapping as f64 / total as f64)
}

/// Leading local persons of one list, in ascending rank.
#[derive(Debug, Clone)]
pub struct LocalHeroes {
    pub edition: Culture,
    pub algorithm: Algorithm,
    pub heroes: Vec<(u32, PersonAnnotation)>,
    /// True when the list held fewer local persons than requested.
    pub shortfall: bool,
}

pub fn local_heroes(
    tables: &PersonTables,
    edition: Culture,
    algorithm: Algorithm,
    top_n: usize,
) -> Result<LocalHeroes, CultureError> {
    let list = tables
        .get(edition, algorithm)
        .ok_or(CultureError::MissingList { edition, algorithm })?;
    let heroes: Vec<(u32, PersonAnnotation)> = list
        .entries()
        .iter()
        .filter(|(_, p)| list.is_local(p))
        .take(top_n)
        .cloned()
        .collect();
    let shortfall = heroes.len() < top_n;
    Ok(LocalHeroes {
        edition,
        algorithm,
        heroes,
        shortfall,
    })
}

/// A person's cross-edition ranking score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalHero {
    pub name: String,
    /// Sum over editions of (L + 1 - R).
    pub theta: u32,
    /// Number of edition lists the person appears in.
    pub appearances: u32,
}

/// Scores every person over all editions of one algorithm: a rank R in a
/// list of length L contributes (L + 1 - R). Sorted by descending score,
/// then descending appearance count, then name.
pub fn global_hero_score(
    tables: &PersonTables,
    algorithm: Algorithm,
) -> Result<Vec<GlobalHero>, CultureError> {
    let lists = tables.for_algorithm(algorithm);
    if lists.is_empty() {
        return Err(CultureError::MissingLists { algorithm });
    }
    let mut scores: BTreeMap<&str, (u32, u32)> = BTreeMap::new();
    for list in &lists {
        let l = list.len() as u32;
        for (rank, person) in list.entries() {
            let entry = scores.entry(person.name.as_str()).or_insert((0, 0));
            entry.0 += l + 1 - rank;
            entry.1 += 1;
        }
    }
    let mut out: Vec<GlobalHero> = scores
        .into_iter()
        .map(|(name, (theta, appearances))| GlobalHero {
            name: name.to_string(),
            theta,
            appearances,
        })
        .collect();
    out.sort_by(|a, b| {
        b.theta
            .cmp(&a.theta)
            .then(b.appearances.cmp(&a.appearances))
            .then(a.name.cmp(&b.name))
    });
    Ok(out)
}

/// Weighted directed meta-graph over the ten culture labels.
///
/// `weight(a, b)` counts persons of culture `b` in edition `a`'s list;
/// within-culture appearances are not links, so the diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CultureNetwork {
    weights: [[u32; 10]; 10],
}

impl CultureNetwork {
    /// Wraps an explicit weight matrix (rows = source culture). The
    /// diagonal is forced to zero.
    pub fn from_weights(mut weights: [[u32; 10]; 10]) -> CultureNetwork {
        for i in 0..10 {
            weights[i][i] = 0;
        }
        CultureNetwork { weights }
    }

    pub fn weight(&self, from: Culture, to: Culture) -> u32 {
        self.weights[from.index()][to.index()]
    }

    pub fn weights(&self) -> &[[u32; 10]; 10] {
        &self.weights
    }

    pub fn total_links(&self) -> u32 {
        self.weights.iter().flatten().sum()
    }
}

/// Counts cross-culture appearances in the lists of one algorithm.
pub fn build_culture_network(
    tables: &PersonTables,
    algorithm: Algorithm,
) -> Result<CultureNetwork, CultureError> {
    let lists = tables.for_algorithm(algorithm);
    if lists.is_empty() {
        return Err(CultureError::MissingLists { algorithm });
    }
    let mut weights = [[0u32; 10]; 10];
    for list in &lists {
        for (_, person) in list.entries() {
            if person.culture != list.edition {
                weights[list.edition.index()][person.culture.index()] += 1;
            }
        }
    }
    Ok(CultureNetwork { weights })
}

/// Google-matrix analysis of a culture network.
#[derive(Debug, Clone)]
pub struct CultureRanks {
    pub pagerank: RankVector,
    pub cheirank: RankVector,
    pub pagerank_index: RankIndex,
    pub cheirank_index: RankIndex,
    /// Dense Google matrix of the culture network, canonical culture order.
    pub google: DenseGoogle,
}

impl CultureRanks {
    /// (K, K*) of one culture, 1-based.
    pub fn plane_position(&self, c: Culture) -> (usize, usize) {
        let node = NodeId(c.index() as u32);
        (
            self.pagerank_index.rank_of(node),
            self.cheirank_index.rank_of(node),
        )
    }
}

const CULTURE_TOL: f64 = 1e-14;
const CULTURE_MAX_ITER: usize = 100_000;

/// Builds the Google matrix of the culture network (columns renormalized
/// to unit sum, cultures without outgoing links getting the uniform
/// column) and power-iterates it and its link-inverted counterpart.
pub fn culture_rank(net: &CultureNetwork, alpha: f64) -> Result<CultureRanks, CultureError> {
    if net.total_links() == 0 {
        return Err(CultureError::DegenerateNetwork);
    }
    let n = Culture::ALL.len();
    let mut w = vec![0.0f64; n * n];
    let mut w_rev = vec![0.0f64; n * n];
    for a in 0..n {
        for b in 0..n {
            w[a * n + b] = net.weights[a][b] as f64;
            w_rev[b * n + a] = net.weights[a][b] as f64;
        }
    }
    let google = DenseGoogle::from_out_weights(&w, n, alpha)?;
    let google_rev = DenseGoogle::from_out_weights(&w_rev, n, alpha)?;
    let pagerank = gmatrix::power_iterate(&google, CULTURE_TOL, CULTURE_MAX_ITER)?;
    let mut cheirank = gmatrix::power_iterate(&google_rev, CULTURE_TOL, CULTURE_MAX_ITER)?;
    cheirank.kind = RankKind::CheiRank;
    let pagerank_index = rank_index(&pagerank);
    let cheirank_index = rank_index(&cheirank);
    Ok(CultureRanks {
        pagerank,
        cheirank,
        pagerank_index,
        cheirank_index,
        google,
    })
}

/// Median incoming-link strength statistics for a set of target nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionStats {
    /// Median over all incoming links of P(source) / k_out(source).
    pub median_contribution: f64,
    /// Median in-degree over the targets.
    pub median_in_degree: f64,
    /// Targets without any incoming link; they contribute no links to the
    /// pooled median.
    pub isolated_targets: Vec<NodeId>,
}

/// Pools P(j)/k_out(j) over every link j -> i with i in `targets` and takes
/// the median, together with the median in-degree of the targets.
pub fn contribution_stats(
    g: &DirectedGraph,
    p: &RankVector,
    targets: &[NodeId],
) -> Result<ContributionStats, CultureError> {
    if targets.is_empty() {
        return Err(CultureError::EmptyTargets);
    }
    if p.len() != g.node_count() {
        return Err(CultureError::VectorGraphMismatch {
            expected: g.node_count(),
            got: p.len(),
        });
    }
    let mut unique: Vec<NodeId> = targets.to_vec();
    unique.sort_unstable();
    unique.dedup();

    let mut contributions = Vec::new();
    let mut in_degrees = Vec::with_capacity(unique.len());
    let mut isolated = Vec::new();
    for &t in &unique {
        let preds = g.in_neighbors(t);
        in_degrees.push(preds.len() as f64);
        if preds.is_empty() {
            isolated.push(t);
            continue;
        }
        for &j in preds {
            contributions.push(p.probability(j) / g.out_degree(j) as f64);
        }
    }
    if contributions.is_empty() {
        return Err(CultureError::NoIncomingLinks);
    }
    Ok(ContributionStats {
        median_contribution: median(&mut contributions),
        median_in_degree: median(&mut in_degrees),
        isolated_targets: isolated,
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
