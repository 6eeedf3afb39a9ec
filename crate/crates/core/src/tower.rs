//! Finite chains of quotients `L_d -> ... -> L_1` with compatible
//! surjections, nested sections, and the section pullback
//! `H^A -> H^B` attached to a surjection `A -> B` with a section.
//!
//! Levels are indexed from 0 (coarsest) to `depth - 1` (finest). Points of
//! the ambient group are `i64`: integers for an integer tower, element
//! indices of the finest level for an explicit one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::group::{Elem, FiniteGroup, FunctionTable, Group, GroupError, GroupHom, WreathElement, WreathGroup};
use crate::word::{evaluate, prefix_set, EquationSystem, Word, WordError};

/// Level numbers in the variants are 0-based and printed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("a tower needs at least one level")]
    Empty,
    #[error("modulus {0} must be at least 1")]
    ZeroModulus(u64),
    #[error("modulus {coarse} does not properly divide {fine}")]
    NotDividing { coarse: u64, fine: u64 },
    #[error("map from level {} to level {} is not surjective", from + 1, to + 1)]
    NotSurjective { from: usize, to: usize },
    #[error(
        "maps are incompatible: level {} -> {} differs from the composite through {} at {at}",
        from + 1,
        to + 1,
        via + 1
    )]
    Incompatible { from: usize, via: usize, to: usize, at: Elem },
    #[error("missing map from level {} to level {}", from + 1, to + 1)]
    MissingMap { from: usize, to: usize },
    #[error("section for level {}: {msg}", level + 1)]
    BadSection { level: usize, msg: String },
    #[error("section for level {} is not contained in the section for level {}", level + 1, finer + 1)]
    NotNested { level: usize, finer: usize },
    #[error("the section is not mapped bijectively onto the target")]
    BadSectionedHom,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerKind {
    Integer { moduli: Vec<u64> },
    Explicit,
}

/// A chain of finite quotients of a common ambient group.
#[derive(Debug, Clone)]
pub struct QuotientTower {
    levels: Vec<FiniteGroup>,
    /// `maps[i][j]` is the projection `L_i -> L_j` for `j <= i`.
    maps: Vec<Vec<GroupHom>>,
    kind: TowerKind,
}

impl QuotientTower {
    /// The tower `Z/m_1 <- Z/m_2 <- ...` of reductions of the integers.
    pub fn integer(moduli: &[u64]) -> Result<Self, TowerError> {
        if moduli.is_empty() {
            return Err(TowerError::Empty);
        }
        for &m in moduli {
            if m == 0 {
                return Err(TowerError::ZeroModulus(m));
            }
        }
        for w in moduli.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(TowerError::NotDividing { coarse: w[0], fine: w[1] });
            }
        }
        let levels: Vec<FiniteGroup> = moduli.iter().map(|&m| FiniteGroup::cyclic(m as usize)).collect();
        let mut maps = Vec::new();
        for (i, li) in levels.iter().enumerate() {
            let row = (0..=i)
                .map(|j| {
                    let m = moduli[j] as usize;
                    GroupHom::new(li.clone(), levels[j].clone(), li.elements().map(|x| x % m).collect())
                })
                .collect::<Result<Vec<_>, _>>()?;
            maps.push(row);
        }
        let t = QuotientTower { levels, maps, kind: TowerKind::Integer { moduli: moduli.to_vec() } };
        t.check()?;
        Ok(t)
    }

    /// A tower from explicit groups (coarsest first) and the consecutive
    /// projections `down[i]: L_{i+1} -> L_i`.
    pub fn explicit(levels: Vec<FiniteGroup>, down: Vec<GroupHom>) -> Result<Self, TowerError> {
        if levels.is_empty() {
            return Err(TowerError::Empty);
        }
        if down.len() + 1 != levels.len() {
            return Err(TowerError::MissingMap { from: down.len() + 1, to: down.len() });
        }
        for (i, h) in down.iter().enumerate() {
            if !h.source().same_structure(&levels[i + 1]) || !h.target().same_structure(&levels[i]) {
                return Err(TowerError::Group(GroupError::HomMismatch));
            }
            if !h.is_surjective() {
                return Err(TowerError::NotSurjective { from: i + 1, to: i });
            }
        }
        let mut maps: Vec<Vec<GroupHom>> = Vec::new();
        for (i, li) in levels.iter().enumerate() {
            let mut row = vec![GroupHom::identity(li); i + 1];
            for j in (0..i).rev() {
                row[j] = row[j + 1].compose(&down[j])?;
            }
            maps.push(row);
        }
        let t = QuotientTower { levels, maps, kind: TowerKind::Explicit };
        t.check()?;
        Ok(t)
    }

    /// Replaces the projection `from -> to` by `hom`, which must agree with
    /// the composite of the consecutive maps.
    pub fn check_map(&self, from: usize, to: usize, hom: &GroupHom) -> Result<(), TowerError> {
        let ours = &self.maps[from][to];
        if let Some(at) = self.levels[from].elements().find(|&x| ours.apply(x) != hom.apply(x)) {
            return Err(TowerError::Incompatible { from, via: from.saturating_sub(1), to, at });
        }
        Ok(())
    }

    /// Surjectivity of every projection and `π_{i→j} = π_{k→j} ∘ π_{i→k}`
    /// for all `i > k > j`, checked exhaustively.
    pub fn check(&self) -> Result<(), TowerError> {
        let d = self.depth();
        for i in 0..d {
            for j in 0..i {
                if !self.maps[i][j].is_surjective() {
                    return Err(TowerError::NotSurjective { from: i, to: j });
                }
                for k in j + 1..i {
                    for x in self.levels[i].elements() {
                        let via = self.maps[k][j].apply(self.maps[i][k].apply(x));
                        if via != self.maps[i][j].apply(x) {
                            return Err(TowerError::Incompatible { from: i, via: k, to: j, at: x });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> &FiniteGroup {
        &self.levels[j]
    }

    pub fn levels(&self) -> &[FiniteGroup] {
        &self.levels
    }

    pub fn kind(&self) -> &TowerKind {
        &self.kind
    }

    pub fn finest(&self) -> usize {
        self.depth() - 1
    }

    /// Projection `L_from -> L_to`, `to <= from`.
    pub fn map(&self, from: usize, to: usize) -> &GroupHom {
        &self.maps[from][to]
    }

    /// The ambient group (integers or the finest level).
    pub fn ambient(&self) -> Ambient<'_> {
        Ambient { tower: self }
    }

    pub fn is_ambient_point(&self, p: i64) -> bool {
        match self.kind {
            TowerKind::Integer { .. } => true,
            TowerKind::Explicit => p >= 0 && (p as usize) < self.levels[self.finest()].order(),
        }
    }

    /// Image of an ambient point in level `j`.
    pub fn project(&self, j: usize, p: i64) -> Elem {
        match &self.kind {
            TowerKind::Integer { moduli } => p.rem_euclid(moduli[j] as i64) as Elem,
            TowerKind::Explicit => self.maps[self.finest()][j].apply(p as Elem),
        }
    }

    pub fn project_all(&self, j: usize, ps: &[i64]) -> Vec<Elem> {
        ps.iter().map(|&p| self.project(j, p)).collect()
    }
}

/// The ambient group of a tower as a [`Group`] on `i64` points.
#[derive(Clone, Copy)]
pub struct Ambient<'a> {
    tower: &'a QuotientTower,
}

impl fmt::Debug for Ambient<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ambient({:?})", self.tower.kind)
    }
}

impl Group for Ambient<'_> {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        match self.tower.kind {
            TowerKind::Integer { .. } => a + b,
            TowerKind::Explicit => self.tower.levels[self.tower.finest()].op(*a as Elem, *b as Elem) as i64,
        }
    }

    fn inv(&self, a: &i64) -> i64 {
        match self.tower.kind {
            TowerKind::Integer { .. } => -a,
            TowerKind::Explicit => self.tower.levels[self.tower.finest()].inverse(*a as Elem) as i64,
        }
    }
}

/// A set of ambient points mapped bijectively onto one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    /// `lift[e]` is the section point over `e`.
    lift: Vec<i64>,
    index: HashMap<i64, Elem>,
}

impl Section {
    pub fn lift(&self, e: Elem) -> i64 {
        self.lift[e]
    }

    pub fn contains(&self, p: i64) -> bool {
        self.index.contains_key(&p)
    }

    pub fn len(&self) -> usize {
        self.lift.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lift.is_empty()
    }

    /// Points in ascending order.
    pub fn points(&self) -> Vec<i64> {
        let mut v = self.lift.clone();
        v.sort_unstable();
        v
    }
}

/// Nested sections `Φ_0 ⊆ Φ_1 ⊆ ...`, one per level.
#[derive(Debug, Clone)]
pub struct SectionFamily {
    sections: Vec<Section>,
}

/// Candidate ambient points in the order the default sections pick them:
/// `0, -1, 1, -2, 2, ...` for the integers, index order otherwise.
fn candidate_points(tower: &QuotientTower) -> Box<dyn Iterator<Item = i64>> {
    match tower.kind {
        TowerKind::Integer { .. } => Box::new((0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![-k, k] })),
        TowerKind::Explicit => Box::new(0..tower.level(tower.finest()).order() as i64),
    }
}

impl SectionFamily {
    /// Builds sections from coarse to fine. Level `j` uses `overrides[j]`
    /// when given; otherwise it extends the previous section by the first
    /// candidate points hitting the missing elements. For integer towers
    /// the defaults are the centered residues `-⌊m/2⌋ .. ⌈m/2⌉ - 1`.
    pub fn build(tower: &QuotientTower, overrides: &[Option<Vec<i64>>]) -> Result<Self, TowerError> {
        let mut sections: Vec<Section> = Vec::new();
        for j in 0..tower.depth() {
            let order = tower.level(j).order();
            let points: Vec<i64> = match overrides.get(j).and_then(|o| o.clone()) {
                Some(p) => p,
                None => {
                    let mut pts: Vec<i64> = sections.last().map(|s| s.lift.clone()).unwrap_or_default();
                    let mut hit = vec![false; order];
                    for &p in &pts {
                        hit[tower.project(j, p)] = true;
                    }
                    let mut missing = hit.iter().filter(|h| !**h).count();
                    for p in candidate_points(tower) {
                        if missing == 0 {
                            break;
                        }
                        let e = tower.project(j, p);
                        if !hit[e] {
                            hit[e] = true;
                            missing -= 1;
                            pts.push(p);
                        }
                    }
                    pts
                }
            };
            sections.push(Self::make_section(tower, j, &points)?);
        }
        let fam = SectionFamily { sections };
        fam.check_nested()?;
        Ok(fam)
    }

    pub fn default_for(tower: &QuotientTower) -> Result<Self, TowerError> {
        Self::build(tower, &[])
    }

    fn make_section(tower: &QuotientTower, j: usize, points: &[i64]) -> Result<Section, TowerError> {
        let order = tower.level(j).order();
        let bad = |msg: String| TowerError::BadSection { level: j, msg };
        if points.len() != order {
            return Err(bad(format!("has {} points, level has {order} elements", points.len())));
        }
        let mut lift = vec![None; order];
        let mut index = HashMap::new();
        for &p in points {
            if !tower.is_ambient_point(p) {
                return Err(bad(format!("{p} is not an ambient point")));
            }
            let e = tower.project(j, p);
            if let Some(q) = lift[e] {
                return Err(bad(format!("{q} and {p} have the same image {e}")));
            }
            lift[e] = Some(p);
            index.insert(p, e);
        }
        Ok(Section { lift: lift.into_iter().map(|p| p.expect("counted")).collect(), index })
    }

    fn check_nested(&self) -> Result<(), TowerError> {
        for j in 1..self.sections.len() {
            if !self.sections[j - 1].lift.iter().all(|p| self.sections[j].contains(*p)) {
                return Err(TowerError::NotNested { level: j - 1, finer: j });
            }
        }
        Ok(())
    }

    pub fn section(&self, j: usize) -> &Section {
        &self.sections[j]
    }

    pub fn depth(&self) -> usize {
        self.sections.len()
    }

    /// The surjection `L_fine -> L_coarse` with the image of `Φ_coarse` in
    /// `L_fine` as its section.
    pub fn sectioned_hom(&self, tower: &QuotientTower, fine: usize, coarse: usize) -> Result<SectionedHom, TowerError> {
        let t: Vec<Elem> = self.sections[coarse].lift.iter().map(|&p| tower.project(fine, p)).collect();
        SectionedHom::new(tower.map(fine, coarse).clone(), t)
    }
}

/// A surjection `γ: A -> B` with a set `T ⊆ A` mapped bijectively onto `B`.
#[derive(Debug, Clone)]
pub struct SectionedHom {
    hom: GroupHom,
    /// `lift[b]` is the element of `T` over `b`.
    lift: Vec<Elem>,
    in_section: Vec<bool>,
}

impl SectionedHom {
    pub fn new(hom: GroupHom, section: Vec<Elem>) -> Result<Self, TowerError> {
        let b = hom.target().order();
        if !hom.is_surjective() || section.len() != b {
            return Err(TowerError::BadSectionedHom);
        }
        let mut lift = vec![usize::MAX; b];
        let mut in_section = vec![false; hom.source().order()];
        for &t in &section {
            if t >= in_section.len() {
                return Err(TowerError::BadSectionedHom);
            }
            let img = hom.apply(t);
            if lift[img] != usize::MAX {
                return Err(TowerError::BadSectionedHom);
            }
            lift[img] = t;
            in_section[t] = true;
        }
        Ok(SectionedHom { hom, lift, in_section })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self::new(GroupHom::identity(g), g.elements().collect()).expect("identity is sectioned")
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn source(&self) -> &FiniteGroup {
        self.hom.source()
    }

    pub fn target(&self) -> &FiniteGroup {
        self.hom.target()
    }

    pub fn in_section(&self, a: Elem) -> bool {
        self.in_section[a]
    }

    pub fn lift(&self, b: Elem) -> Elem {
        self.lift[b]
    }

    pub fn section(&self) -> &[Elem] {
        &self.lift
    }
}

/// `φ_γ(γ(t)) = φ(t)` for `t` in the section.
pub fn section_pullback(sh: &SectionedHom, phi: &FunctionTable) -> FunctionTable {
    FunctionTable(sh.lift.iter().map(|&t| phi.get(t)).collect())
}

/// `(φ, α) -> (φ_γ, γ(α))`.
pub fn wreath_pushforward(sh: &SectionedHom, e: &WreathElement) -> WreathElement {
    WreathElement { f: section_pullback(sh, &e.f), g: sh.hom.apply(e.g) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalityOutcome {
    /// `x S(ᾱ) ⊄ T`; `agrees` records whether the two values matched anyway.
    PremiseFails {
        agrees: bool,
    },
    Verified,
    /// The two values differ although the premise holds.
    Violation,
}

/// Compares the `H`-component of `p` at `x`, evaluated in `H wr A`, with
/// the one at `γ(x)` after pushing every argument forward to `H wr B`.
pub fn check_locality(
    p: &Word,
    h: &FiniteGroup,
    consts: &[WreathElement],
    vars: &[WreathElement],
    sh: &SectionedHom,
    x: Elem,
) -> Result<LocalityOutcome, WordError> {
    let a = sh.source();
    let alpha_c: Vec<Elem> = consts.iter().map(|e| e.g).collect();
    let alpha_v: Vec<Elem> = vars.iter().map(|e| e.g).collect();
    let mut premise = true;
    for q in prefix_set(p) {
        let s = evaluate(&q, a, &alpha_c, &alpha_v)?;
        if !sh.in_section(a.op(x, s)) {
            premise = false;
            break;
        }
    }
    let upstairs = WreathGroup::new(h.clone(), a.clone());
    let downstairs = WreathGroup::new(h.clone(), sh.target().clone());
    let psi = evaluate(p, &upstairs, consts, vars)?;
    let push = |v: &[WreathElement]| v.iter().map(|e| wreath_pushforward(sh, e)).collect::<Vec<_>>();
    let psi_t = evaluate(p, &downstairs, &push(consts), &push(vars))?;
    let agrees = psi.f.get(x) == psi_t.f.get(sh.hom.apply(x));
    Ok(match (premise, agrees) {
        (false, agrees) => LocalityOutcome::PremiseFails { agrees },
        (true, true) => LocalityOutcome::Verified,
        (true, false) => LocalityOutcome::Violation,
    })
}

/// Whether `w̄(ā_j, ū_j) = 1` at each level `j`, for ambient `ā`, `ū`.
pub fn finite_level_check(
    sys: &EquationSystem,
    consts: &[i64],
    vars: &[i64],
    tower: &QuotientTower,
) -> Result<Vec<bool>, WordError> {
    (0..tower.depth())
        .map(|j| {
            let g = tower.level(j);
            sys.is_satisfied(g, &tower.project_all(j, consts), &tower.project_all(j, vars))
        })
        .collect()
}

/// A tower with its sections, as read from a tower file.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub tower: QuotientTower,
    pub sections: SectionFamily,
}

/// Parses a tower file.
///
/// ```text
/// ztower 2 4 8
/// section 1 0 1
/// ```
///
/// or an explicit chain, coarsest level first. A `level` line either names
/// a group file (resolved through `resolve`) or is followed by an inline
/// group description; `map <from> <to> <images...>` gives the projection
/// between 1-based levels and is required for every consecutive pair.
///
/// ```text
/// explicit
/// level
/// cayley 2
/// 0 1
/// 1 0
/// level z4.grp
/// map 2 1 0 1 0 1
/// ```
pub fn parse_tower_file(text: &str, resolve: &dyn Fn(&str) -> Result<String, String>) -> Result<TowerSpec, TowerError> {
    let perr = |line: usize, msg: String| TowerError::Parse { line, msg };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let (hline, header) = *lines.first().ok_or_else(|| perr(1, "empty tower file".into()))?;
    let mut head = header.split_whitespace();
    let kind = head.next().unwrap_or("");

    let mut section_lines: Vec<(usize, usize, Vec<i64>)> = Vec::new();
    let parse_section = |ln: usize, rest: &[&str]| -> Result<(usize, usize, Vec<i64>), TowerError> {
        let (lvl, pts) = rest.split_first().ok_or_else(|| perr(ln, "section needs a level".into()))?;
        let lvl: usize = lvl.parse().map_err(|_| perr(ln, format!("bad level {lvl:?}")))?;
        let pts = pts
            .iter()
            .map(|t| t.parse::<i64>().map_err(|_| perr(ln, format!("bad point {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((ln, lvl, pts))
    };

    let tower = match kind {
        "ztower" => {
            let moduli = head
                .map(|t| t.parse::<u64>().map_err(|_| perr(hline, format!("bad modulus {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            for &(ln, l) in &lines[1..] {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks.split_first() {
                    Some((&"section", rest)) => section_lines.push(parse_section(ln, rest)?),
                    _ => return Err(perr(ln, format!("unexpected line {l:?}"))),
                }
            }
            QuotientTower::integer(&moduli)?
        }
        "explicit" => {
            if head.next().is_some() {
                return Err(perr(hline, "trailing tokens after 'explicit'".into()));
            }
            let mut groups: Vec<FiniteGroup> = Vec::new();
            let mut maps: Vec<(usize, usize, usize, Vec<Elem>)> = Vec::new();
            let mut i = 1;
            while i < lines.len() {
                let (ln, l) = lines[i];
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks.as_slice() {
                    ["level"] => {
                        let mut body = String::new();
                        i += 1;
                        while i < lines.len() {
                            let first = lines[i].1.split_whitespace().next().unwrap_or("");
                            if matches!(first, "level" | "map" | "section") {
                                break;
                            }
                            body.push_str(lines[i].1);
                            body.push('\n');
                            i += 1;
                        }
                        let g = crate::group::parse_group_file(&body)
                            .map_err(|e| perr(ln, format!("inline group: {e}")))?;
                        groups.push(g.renamed(format!("L{}", groups.len() + 1)));
                        continue;
                    }
                    ["level", path] => {
                        let body = resolve(path).map_err(|e| perr(ln, e))?;
                        let g = crate::group::parse_group_file(&body).map_err(|e| perr(ln, format!("{path}: {e}")))?;
                        groups.push(g.renamed(format!("L{}", groups.len() + 1)));
                    }
                    ["map", from, to, images @ ..] => {
                        let from: usize = from.parse().map_err(|_| perr(ln, "bad level".into()))?;
                        let to: usize = to.parse().map_err(|_| perr(ln, "bad level".into()))?;
                        let images = images
                            .iter()
                            .map(|t| t.parse::<Elem>().map_err(|_| perr(ln, format!("bad image {t:?}"))))
                            .collect::<Result<Vec<_>, _>>()?;
                        maps.push((ln, from, to, images));
                    }
                    ["section", rest @ ..] => section_lines.push(parse_section(ln, rest)?),
                    _ => return Err(perr(ln, format!("unexpected line {l:?}"))),
                }
                i += 1;
            }
            let d = groups.len();
            let mut down: Vec<Option<GroupHom>> = vec![None; d.saturating_sub(1)];
            let mut extra = Vec::new();
            for (ln, from, to, images) in maps {
                if from > d || to == 0 || to >= from {
                    return Err(perr(ln, format!("map {from} -> {to} does not go to a coarser level")));
                }
                let hom = GroupHom::new(groups[from - 1].clone(), groups[to - 1].clone(), images)
                    .map_err(|e| perr(ln, e.to_string()))?;
                if to + 1 == from {
                    down[to - 1] = Some(hom);
                } else {
                    extra.push((from - 1, to - 1, hom));
                }
            }
            let down = down
                .into_iter()
                .enumerate()
                .map(|(i, h)| h.ok_or(TowerError::MissingMap { from: i + 1, to: i }))
                .collect::<Result<Vec<_>, _>>()?;
            let tower = QuotientTower::explicit(groups, down)?;
            for (from, to, hom) in extra {
                tower.check_map(from, to, &hom)?;
            }
            tower
        }
        other => return Err(perr(hline, format!("unknown tower kind {other:?}"))),
    };

    let mut overrides: Vec<Option<Vec<i64>>> = vec![None; tower.depth()];
    for (ln, lvl, pts) in section_lines {
        if lvl == 0 || lvl > tower.depth() {
            return Err(perr(ln, format!("no level {lvl}")));
        }
        overrides[lvl - 1] = Some(pts);
    }
    let sections = SectionFamily::build(&tower, &overrides)?;
    Ok(TowerSpec { tower, sections })
}

/// Elements of `A` reached as `x s` for `s` in the prefix values of `p`.
pub fn window(p: &Word, a: &FiniteGroup, consts: &[Elem], vars: &[Elem], x: Elem) -> Result<BTreeSet<Elem>, WordError> {
    prefix_set(p).iter().map(|q| evaluate(q, a, consts, vars).map(|s| a.op(x, s))).collect()
}
