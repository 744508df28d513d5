//! Text input. Braid words and PD codes have their own readers; everything else uses the
//! word grammar.
//!
//! Word grammar, one statement per line or separated by `;`, `#` starts a comment:
//!
//! ```text
//! bottom 4            # number of bottom points (even, default 0)
//! orient + - + -      # bottom signs, + means the strand leaves upwards
//! x 1                 # also `slice x 1`; kinds: x, xbar, cap, cup, vert
//! cap 2
//! orient top + -      # optional top signs
//! reverse-component 1 # flip a component (1-based, ordered by smallest point)
//! ```

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::word::{SliceKind, TangleWord};

/// Largest accepted number of boundary points.
const MAX_POINTS: usize = 512;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// Statements as (line, tokens), with comments stripped.
fn statements(text: &str) -> Vec<(usize, Vec<Token<'_>>)> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start = 0;
        for part in line.split(';') {
            let mut toks = Vec::new();
            let mut offset = 0;
            for t in part.split_whitespace() {
                let at = part[offset..].find(t).map_or(offset, |p| p + offset);
                toks.push(Token { text: t, column: start + at + 1 });
                offset = at + t.len();
            }
            if !toks.is_empty() {
                out.push((ln + 1, toks));
            }
            start += part.len() + 1;
        }
    }
    out
}

fn number(line: usize, t: &Token<'_>) -> Result<usize> {
    t.text
        .parse::<usize>()
        .map_err(|_| syntax(line, t.column, format!("expected a number, found `{}`", t.text)))
}

fn signs(line: usize, toks: &[Token<'_>]) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    for t in toks {
        for (k, ch) in t.text.char_indices() {
            match ch {
                '+' => out.push(true),
                '-' => out.push(false),
                _ => return Err(syntax(line, t.column + k, format!("expected + or -, found `{ch}`"))),
            }
        }
    }
    Ok(out)
}

/// Parses the word grammar and checks orientations.
pub fn parse_tangle(text: &str) -> Result<TangleWord> {
    let stmts = statements(text);
    let mut word: Option<TangleWord> = None;
    let mut bottom_signs: Option<(usize, Vec<bool>)> = None;
    let mut top_signs: Option<(usize, Vec<bool>)> = None;
    let mut reversed = Vec::new();
    for (line, toks) in &stmts {
        let line = *line;
        let head = &toks[0];
        let args = &toks[1..];
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                let col = args.get(n).map_or(head.column, |t| t.column);
                return Err(syntax(line, col, format!("`{}` takes {n} argument(s)", head.text)));
            }
            Ok(())
        };
        match head.text {
            "bottom" => {
                arity(1)?;
                if word.is_some() {
                    return Err(syntax(line, head.column, "`bottom` must come before any slice"));
                }
                let n = number(line, &args[0])?;
                if n % 2 != 0 || n > MAX_POINTS {
                    return Err(Error::WordArity {
                        line,
                        message: format!("bottom needs an even number of points at most {MAX_POINTS}, got {n}"),
                    });
                }
                word = Some(TangleWord::new(n).expect("even"));
            }
            "orient" => {
                if args.first().is_some_and(|t| t.text == "top") {
                    top_signs = Some((line, signs(line, &args[1..])?));
                } else {
                    bottom_signs = Some((line, signs(line, args)?));
                }
            }
            "reverse-component" => {
                arity(1)?;
                let k = number(line, &args[0])?;
                if k == 0 {
                    return Err(syntax(line, args[0].column, "components are numbered from 1"));
                }
                reversed.push(k - 1);
            }
            _ => {
                let (kind_tok, rest) = if head.text == "slice" {
                    let Some(k) = args.first() else {
                        return Err(syntax(line, head.column, "`slice` needs a kind"));
                    };
                    (k, &args[1..])
                } else {
                    (head, args)
                };
                let kind = match kind_tok.text {
                    "x" => SliceKind::X,
                    "xbar" => SliceKind::XBar,
                    "cap" => SliceKind::Cap,
                    "cup" => SliceKind::Cup,
                    "vert" => SliceKind::Vert,
                    other => {
                        return Err(syntax(line, kind_tok.column, format!("unknown statement `{other}`")))
                    }
                };
                let w = word.get_or_insert_with(|| TangleWord::new(0).expect("empty"));
                if kind == SliceKind::Vert {
                    if rest.len() > 1 {
                        return Err(syntax(line, rest[1].column, "`vert` takes at most one argument"));
                    }
                    continue;
                }
                if rest.len() != 1 {
                    let col = rest.get(1).map_or(kind_tok.column, |t| t.column);
                    return Err(syntax(line, col, format!("`{}` takes one position", kind_tok.text)));
                }
                let pos = number(line, &rest[0])?;
                if pos == 0 {
                    return Err(syntax(line, rest[0].column, "positions are numbered from 1"));
                }
                if w.top_points() + 2 > MAX_POINTS && kind == SliceKind::Cup {
                    return Err(Error::WordArity { line, message: format!("more than {MAX_POINTS} strands") });
                }
                w.push(kind, pos - 1).map_err(|e| Error::WordArity { line, message: e.to_string() })?;
            }
        }
    }
    let mut word = word.unwrap_or_else(|| TangleWord::new(0).expect("empty"));
    if let Some((_, s)) = bottom_signs {
        word.set_bottom_orient(s)?;
    }
    if let Some((_, s)) = top_signs {
        word.set_top_orient(s)?;
    }
    for k in reversed {
        word.reverse_component(k);
    }
    let o = word.orientation()?;
    if let Some(&k) = word.reversed().iter().find(|&&k| k >= o.components) {
        return Err(Error::Orientation(format!(
            "reverse-component {} but the word has {} component(s)",
            k + 1,
            o.components
        )));
    }
    Ok(word)
}

/// A braid on `strands` strands; generator `±i` crosses strands `i` and `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    pub strands: usize,
    pub generators: Vec<i32>,
}

impl Braid {
    /// The open braid with all strands oriented upwards (needs an even strand count).
    pub fn word(&self) -> Result<TangleWord> {
        let mut w = TangleWord::new(self.strands)?;
        for &g in &self.generators {
            let kind = if g > 0 { SliceKind::X } else { SliceKind::XBar };
            w.push(kind, g.unsigned_abs() as usize - 1)?;
        }
        w.set_bottom_orient(vec![true; self.strands])?;
        Ok(w)
    }

    /// The standard closure: nested cups, the braid on the right half, then nested caps.
    pub fn closure(&self) -> Result<TangleWord> {
        let k = self.strands;
        let mut w = TangleWord::new(0)?;
        for j in 0..k {
            w.push(SliceKind::Cup, j)?;
        }
        for &g in &self.generators {
            let kind = if g > 0 { SliceKind::X } else { SliceKind::XBar };
            w.push(kind, k + g.unsigned_abs() as usize - 1)?;
        }
        for j in (0..k).rev() {
            w.push(SliceKind::Cap, j)?;
        }
        Ok(w)
    }
}

/// Parses `s1 s-2 s1^-1 3 -1 ...`; `strands` defaults to one more than the largest index.
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<Braid> {
    let mut generators = Vec::new();
    for (line, toks) in statements(&text.replace(',', " ")) {
        for t in toks {
            let mut s = t.text.trim_start_matches(['s', 'S', 'σ']);
            let mut sign = 1;
            for suffix in ["^-1", "^{-1}", "'", "i"] {
                if let Some(r) = s.strip_suffix(suffix) {
                    s = r;
                    sign = -1;
                    break;
                }
            }
            let v: i32 = s
                .parse()
                .map_err(|_| syntax(line, t.column, format!("bad braid generator `{}`", t.text)))?;
            if v == 0 || v.unsigned_abs() as usize >= MAX_POINTS {
                return Err(syntax(line, t.column, format!("generator index out of range in `{}`", t.text)));
            }
            generators.push(sign * v);
        }
    }
    let needed = generators.iter().map(|g| g.unsigned_abs() as usize + 1).max().unwrap_or(0);
    let strands = strands.unwrap_or(needed.max(1));
    if needed > strands {
        return Err(Error::WordArity {
            line: 1,
            message: format!("generator needs {needed} strands, braid has {strands}"),
        });
    }
    Ok(Braid { strands, generators })
}

/// One PD crossing `X(a, b, c, d)`: counterclockwise from the incoming under strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PdCrossing(pub [i64; 4]);

/// Reads `X(1,4,2,5) X(3,6,4,1) ...`, also accepting `PD[X[...], ...]` and `Loop(k)`.
fn pd_entries(text: &str) -> Result<(Vec<PdCrossing>, usize)> {
    let cleaned: String = text
        .chars()
        .map(|c| if matches!(c, '[' | '{') { '(' } else if matches!(c, ']' | '}') { ')' } else { c })
        .collect();
    let mut s = cleaned.trim();
    if let Some(r) = s.strip_prefix("PD") {
        s = r.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            s = inner;
        } else {
            return Err(Error::Pd("expected PD(...)".into()));
        }
    }
    let mut crossings = Vec::new();
    let mut loops = 0;
    let mut rest = s;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == ';');
        if rest.is_empty() {
            break;
        }
        let open = rest.find('(').ok_or_else(|| Error::Pd(format!("expected `(` in `{rest}`")))?;
        let close = rest.find(')').ok_or_else(|| Error::Pd("unbalanced parentheses".into()))?;
        if close < open {
            return Err(Error::Pd("unbalanced parentheses".into()));
        }
        let head = rest[..open].trim();
        let nums: Vec<i64> = rest[open + 1..close]
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Pd(format!("bad label `{}`", x.trim()))))
            .collect::<Result<_>>()?;
        match head {
            "X" | "x" => {
                let arr: [i64; 4] = nums
                    .try_into()
                    .map_err(|_| Error::Pd("a crossing needs four labels".into()))?;
                crossings.push(PdCrossing(arr));
            }
            "Loop" | "loop" | "O" => loops += 1,
            other => return Err(Error::Pd(format!("unknown PD entry `{other}`"))),
        }
        rest = &rest[close + 1..];
    }
    Ok((crossings, loops))
}

/// Direction of each pass through each crossing: `dirs[k][0]` is `true` when the under
/// strand runs `a → c` (always), `dirs[k][1]` is `true` when the over strand runs `b → d`.
fn pd_directions(xs: &[PdCrossing]) -> Result<Vec<[bool; 2]>> {
    // Occurrences of each label as (crossing, slot).
    let mut occ: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for (k, x) in xs.iter().enumerate() {
        for (slot, &l) in x.0.iter().enumerate() {
            occ.entry(l).or_default().push((k, slot));
        }
    }
    if let Some((l, v)) = occ.iter().find(|(_, v)| v.len() != 2) {
        return Err(Error::Pd(format!("label {l} appears {} time(s), expected 2", v.len())));
    }
    // over[k]: None unknown, Some(true) b→d.
    let mut over: Vec<Option<bool>> = vec![None; xs.len()];
    // Whether the occurrence (k, slot) is where the strand enters crossing k.
    let enters = |over: &Vec<Option<bool>>, k: usize, slot: usize| -> Option<bool> {
        match slot {
            0 => Some(true),
            2 => Some(false),
            1 => over[k],
            _ => over[k].map(|v| !v),
        }
    };
    loop {
        let mut progress = false;
        for v in occ.values() {
            let [(k1, s1), (k2, s2)] = [v[0], v[1]];
            match (enters(&over, k1, s1), enters(&over, k2, s2)) {
                (Some(a), Some(b)) if a == b => {
                    return Err(Error::Pd("inconsistent strand orientations".into()));
                }
                (Some(a), None) => {
                    // The other end must have the opposite role.
                    over[k2] = Some(if s2 == 1 { !a } else { a });
                    progress = true;
                }
                (None, Some(b)) => {
                    over[k1] = Some(if s1 == 1 { !b } else { b });
                    progress = true;
                }
                _ => {}
            }
        }
        if progress {
            continue;
        }
        // A component that only passes over: orient by consecutive labels.
        let Some(k) = over.iter().position(|o| o.is_none()) else { break };
        let [_, b, _, d] = xs[k].0;
        over[k] = Some(d == b + 1 || (b > d + 1));
    }
    Ok(over.into_iter().map(|o| [true, o.expect("all directions resolved")]).collect())
}

/// Sweeps a PD code into a link word, keeping the cyclic order at every crossing so the
/// resulting diagram has the same planar embedding on the sphere.
pub fn parse_pd(text: &str) -> Result<TangleWord> {
    let (xs, loops) = pd_entries(text)?;
    let dirs = pd_directions(&xs)?;
    let n = xs.len();
    // Slices are kept as (kind, position) and rewritten when the front is rotated.
    let mut slices: Vec<(SliceKind, usize)> = Vec::new();
    let mut front: Vec<i64> = Vec::new();
    // Per placed crossing: PD index and rotation.
    let mut placed: Vec<(usize, usize)> = Vec::new();
    let mut done = vec![false; n];
    let rotate_left = |slices: &mut Vec<(SliceKind, usize)>, front: &mut Vec<i64>| {
        // Move the leftmost strand to the right end by routing it under the swept part.
        let mut s = vec![(SliceKind::Cup, 0)];
        s.extend(slices.iter().map(|&(k, p)| (k, p + 1)));
        s.push((SliceKind::Cap, 0));
        *slices = s;
        let f = front.remove(0);
        front.push(f);
    };
    let cap_pairs = |slices: &mut Vec<(SliceKind, usize)>, front: &mut Vec<i64>| loop {
        if let Some(p) = (0..front.len().saturating_sub(1)).find(|&p| front[p] == front[p + 1]) {
            slices.push((SliceKind::Cap, p));
            front.drain(p..p + 2);
            continue;
        }
        if front.len() >= 2 && front[0] == front[front.len() - 1] {
            let f = front.remove(0);
            front.push(f);
            let mut s = vec![(SliceKind::Cup, 0)];
            s.extend(slices.iter().map(|&(k, p)| (k, p + 1)));
            s.push((SliceKind::Cap, 0));
            *slices = s;
            continue;
        }
        break;
    };
    for _ in 0..n {
        // Best crossing: longest run of front edges, contiguous (cyclically) in the front.
        let mut best: Option<(usize, usize, usize, usize)> = None; // (s, crossing, k, front pos)
        let w = front.len();
        for (c, x) in xs.iter().enumerate() {
            if done[c] {
                continue;
            }
            for s in (1..=4usize.min(w)).rev() {
                if best.is_some_and(|b| b.0 >= s) {
                    break;
                }
                let mut found = None;
                'outer: for k in 0..4 {
                    let run: Vec<i64> = (0..s).map(|t| x.0[(k + t) % 4]).collect();
                    // Remaining corners must not be on the front.
                    let rest_ok = (s..4).all(|t| {
                        let l = x.0[(k + t) % 4];
                        !front.contains(&l) || run.contains(&l)
                    });
                    if !rest_ok {
                        continue;
                    }
                    for p in 0..w {
                        if (0..s).all(|t| front[(p + t) % w] == run[t]) {
                            found = Some((k, p));
                            break 'outer;
                        }
                    }
                }
                if let Some((k, p)) = found {
                    best = Some((s, c, k, p));
                    break;
                }
            }
        }
        let (s, c, k, p) = match best {
            Some(b) => b,
            None if xs.iter().enumerate().all(|(c, x)| done[c] || x.0.iter().all(|l| !front.contains(l))) => {
                let c = (0..n).find(|&c| !done[c]).expect("a crossing is left");
                (0, c, 0, w)
            }
            None => return Err(Error::Pd("no planar sweep order found".into())),
        };
        let e = xs[c].0;
        let mut p = p;
        if s > 0 && p + s > front.len() {
            for _ in 0..(p + s - front.len()) {
                rotate_left(&mut slices, &mut front);
            }
            p = front.len() - s;
        }
        // Place the crossing with rotation r (corners BL, BR, TR, TL = e[r..r+4]).
        let (r, new_block, pos) = match s {
            0 => {
                slices.push((SliceKind::Cup, p));
                slices.push((SliceKind::Cup, p + 2));
                (0, vec![e[0], e[3], e[2], e[1]], p + 1)
            }
            1 => {
                slices.push((SliceKind::Cup, p + 1));
                (k, vec![e[(k + 3) % 4], e[(k + 2) % 4], e[(k + 1) % 4]], p)
            }
            2 => (k, vec![e[(k + 3) % 4], e[(k + 2) % 4]], p),
            3 => ((k + 1) % 4, vec![e[k], e[(k + 3) % 4]], p + 1),
            _ => ((k + 1) % 4, vec![e[k], e[k], e[(k + 3) % 4], e[(k + 3) % 4]], p + 1),
        };
        let kind = if r % 2 == 1 { SliceKind::X } else { SliceKind::XBar };
        slices.push((kind, pos));
        placed.push((c, r));
        done[c] = true;
        match s {
            0 => {
                front.splice(p..p, new_block);
            }
            1 | 2 => {
                front.splice(p..p + s, new_block);
            }
            _ => {
                // The crossing sits between the outer run edges, which `cap_pairs` closes off.
                let mut f = front[..p].to_vec();
                f.extend([e[k], e[k], e[(k + 3) % 4]]);
                if s == 4 {
                    f.push(e[(k + 3) % 4]);
                }
                f.extend_from_slice(&front[p + s..]);
                front = f;
            }
        }
        cap_pairs(&mut slices, &mut front);
    }
    if !front.is_empty() {
        return Err(Error::Pd("strands left open after the sweep".into()));
    }
    for _ in 0..loops {
        slices.push((SliceKind::Cup, 0));
        slices.push((SliceKind::Cap, 0));
    }
    let mut word = TangleWord::from_slices(0, &slices)?;
    // Orient components as the PD code does.
    let o = word.orientation()?;
    let mut want: HashMap<usize, bool> = HashMap::new();
    let mut cross_idx = 0;
    for &(kind, _) in &slices {
        if !kind.is_crossing() {
            continue;
        }
        let (c, r) = placed[cross_idx];
        let e_dir = dirs[c];
        // Strand through corners (BL, TR) = slots (r, r+2); (BR, TL) = slots (r+1, r+3).
        for (diag, bottom_slot) in [(0usize, r), (1, (r + 1) % 4)] {
            // Slot 0 or 1 entering means the pass runs from slot s to s+2.
            let pass_forward = if bottom_slot % 2 == 0 { e_dir[0] } else { e_dir[1] };
            let up = pass_forward == (bottom_slot < 2);
            let (comp, cur_up) = o.strands[cross_idx][diag];
            let flip = up != cur_up;
            if let Some(&prev) = want.get(&comp) {
                if prev != flip {
                    return Err(Error::Pd("inconsistent component orientation".into()));
                }
            }
            want.insert(comp, flip);
        }
        cross_idx += 1;
    }
    for (comp, flip) in want {
        if flip {
            word.reverse_component(comp);
        }
    }
    Ok(word)
}

/// Which text format an input uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Auto,
    Word,
    Braid,
    Pd,
}

fn looks_like_pd(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with("PD") || ["X[", "X(", "Loop"].iter().any(|p| t.starts_with(p))
}

fn looks_like_braid(text: &str) -> bool {
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|t| !t.is_empty())
        .collect();
    !body.is_empty()
        && body.iter().all(|t| {
            let t = t.trim_start_matches('s');
            let t = t.strip_suffix("^-1").unwrap_or(t);
            let t = t.strip_prefix('-').unwrap_or(t);
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
        })
}

/// Parses any supported input; braids are read as their closures.
pub fn parse_input(text: &str, format: InputFormat) -> Result<TangleWord> {
    let format = match format {
        InputFormat::Auto if looks_like_pd(text) => InputFormat::Pd,
        InputFormat::Auto if looks_like_braid(text) => InputFormat::Braid,
        InputFormat::Auto => InputFormat::Word,
        f => f,
    };
    match format {
        InputFormat::Pd => parse_pd(text),
        InputFormat::Braid => parse_braid(text, None)?.closure(),
        _ => parse_tangle(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{jones, kauffman};

    #[test]
    fn simple_words() {
        let w = parse_tangle("bottom 2; cap 1").unwrap();
        assert_eq!(w.top_points(), 0);
        let w = parse_tangle("bottom 4\nx 1\nslice x 2 # middle\nx 1").unwrap();
        assert_eq!(w.crossings(), 3);
        let w = parse_tangle("cup 1; cup 2; cap 2; cap 1").unwrap();
        assert_eq!(w.resolution(0).circles(), 2);
        assert_eq!(parse_tangle(&w.to_text()).unwrap(), w);
        assert_eq!(parse_tangle("").unwrap().bottom_points(), 0);
    }

    #[test]
    fn orientation_statements() {
        let w = parse_tangle("bottom 2; orient +-; x 1; orient top -+").unwrap();
        assert_eq!(w.orientation().unwrap().x, 1);
        assert!(matches!(parse_tangle("bottom 2; orient ++; cap 1"), Err(Error::Orientation(_))));
        assert!(matches!(parse_tangle("bottom 2; orient +"), Err(Error::Orientation(_))));
        assert!(matches!(parse_tangle("bottom 2; x 1; reverse-component 3"), Err(Error::Orientation(_))));
        let w = parse_tangle("bottom 2; x 1; reverse-component 2").unwrap();
        assert_eq!(w.orientation().unwrap().bottom, vec![true, false]);
        assert_eq!(parse_tangle(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn errors_are_distinct() {
        match parse_tangle("bottom 2\n  twist 1") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_tangle("bottom 3"), Err(Error::WordArity { line: 1, .. })));
        assert!(matches!(parse_tangle("bottom 2; x 2"), Err(Error::WordArity { .. })));
        assert!(matches!(parse_tangle("bottom 2; cap 0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_tangle("bottom two"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_tangle("x 1; bottom 2"), Err(Error::Syntax { .. }) | Err(Error::WordArity { .. })));
    }

    #[test]
    fn braids() {
        let b = parse_braid("", Some(2)).unwrap();
        assert_eq!(b.word().unwrap().resolution(0), crate::planar::FlatTangle::vert(1));
        let b = parse_braid("s1 s1^-1", None).unwrap();
        assert_eq!(b.generators, vec![1, -1]);
        let t = parse_braid("s1 s1 s1", None).unwrap().closure().unwrap();
        assert_eq!(t.crossings(), 3);
        assert_eq!(t.orientation().unwrap().components, 1);
        assert_eq!(parse_braid("1 -2 1 -2", None).unwrap().strands, 3);
        assert!(parse_braid("s0", None).is_err());
        assert!(parse_braid("s3", Some(2)).is_err());
    }

    fn braid_jones(text: &str) -> crate::laurent::LaurentPoly {
        jones(&parse_braid(text, None).unwrap().closure().unwrap()).unwrap()
    }

    #[test]
    fn pd_unknot_hopf_trefoil() {
        let u = parse_pd("PD[Loop[1]]").unwrap();
        assert_eq!(jones(&u).unwrap(), crate::laurent::LaurentPoly::circle());
        let hopf = parse_pd("X[4,1,3,2], X[2,3,1,4]").unwrap();
        let o = hopf.orientation().unwrap();
        assert_eq!(o.x + o.y, 2);
        let jh = jones(&hopf).unwrap();
        assert!(jh == braid_jones("s1 s1") || jh == braid_jones("s-1 s-1"), "{jh}");
        let tre = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        let o = tre.orientation().unwrap();
        assert!(o.x == 3 || o.y == 3, "{o:?}");
        let jt = jones(&tre).unwrap();
        assert!(jt == braid_jones("s1 s1 s1") || jt == braid_jones("s-1 s-1 s-1"), "{jt}");
        let kink = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(kauffman(&kink).unwrap(), kauffman(&u).unwrap());
    }

    #[test]
    fn pd_figure_eight() {
        let f8 = parse_pd("X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]").unwrap();
        assert_eq!(jones(&f8).unwrap(), braid_jones("s1 s-2 s1 s-2"));
    }

    #[test]
    fn pd_larger_knots_match_braids() {
        let cases = [
            ("X[1,6,2,7], X[3,8,4,9], X[5,10,6,1], X[7,2,8,3], X[9,4,10,5]", "1 1 1 1 1"),
            ("X[1,4,2,5], X[3,8,4,9], X[5,10,6,1], X[9,6,10,7], X[7,2,8,3]", "-1 -1 -1 -2 1 -2"),
            (
                "X[1,4,2,5], X[7,10,8,11], X[3,9,4,8], X[9,3,10,2], X[5,12,6,1], X[11,6,12,7]",
                "-1 -1 -2 1 3 -2 3",
            ),
        ];
        for (pd, br) in cases {
            let j = jones(&parse_pd(pd).unwrap()).unwrap();
            let mirror: String = br.split_whitespace().map(|g| format!("{} ", -g.parse::<i32>().unwrap())).collect();
            assert!(j == braid_jones(br) || j == braid_jones(&mirror), "{pd}: {j}");
        }
    }

    #[test]
    fn input_detection() {
        assert_eq!(parse_input("X[4,1,3,2], X[2,3,1,4]", InputFormat::Auto).unwrap().crossings(), 2);
        assert_eq!(parse_input("s1 s1 s1", InputFormat::Auto).unwrap().crossings(), 3);
        assert_eq!(parse_input("bottom 2\nx 1", InputFormat::Auto).unwrap().crossings(), 1);
        assert!(parse_input("x 1", InputFormat::Braid).is_err());
    }

    #[test]
    fn pd_errors() {
        assert!(matches!(parse_pd("X[1,2,3]"), Err(Error::Pd(_))));
        assert!(matches!(parse_pd("X[1,2,3,4]"), Err(Error::Pd(_))));
        assert!(matches!(parse_pd("Y(1,2)"), Err(Error::Pd(_))));
        assert!(matches!(parse_pd("X(1,2"), Err(Error::Pd(_))));
    }
}
