//! One pass/fail line per acceptance criterion. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arcring::bimodule::{basis_tangles, tensor_rank_check};
use arcring::complex::Cube;
use arcring::corpus::{corpus, curl_cap, links, move_pair, Move};
use arcring::invariants::{jones_report, kauffman};
use arcring::report::verify_report;
use arcring::ring::{cartan_report, delta_m_check};
use arcring::{build_cube, compose, enumerate_matchings, ArcRing, FlatTangle, TangleWord};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn ranks(pairs: &[(i32, u64)]) -> BTreeMap<i32, u64> {
    pairs.iter().copied().collect()
}

fn catalan_counts() -> Outcome {
    let start = Instant::now();
    let want = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
    let got: Vec<usize> = (0..=8).map(|n| enumerate_matchings(n).len()).collect();
    ensure(got == want, format!("got {got:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{got:?}"))
}

fn small_rings() -> Outcome {
    let h0 = ArcRing::new(0);
    ensure(h0.graded_ranks() == ranks(&[(0, 1)]), "H^0 is not Z")?;
    let h1 = ArcRing::new(1);
    ensure(h1.graded_ranks() == ranks(&[(0, 1), (2, 1)]), format!("H^1 ranks {:?}", h1.graded_ranks()))?;
    let h2 = ArcRing::new(2);
    for b in 0..2 {
        for a in 0..2 {
            let want = if a == b { ranks(&[(0, 1), (2, 2), (4, 1)]) } else { ranks(&[(1, 1), (3, 1)]) };
            let got = h2.component_ranks(b, a);
            ensure(got == want, format!("H^2 component ({b},{a}) has {got:?}"))?;
        }
    }
    Ok("H^0 = Z, H^1 {0:1, 2:1}, H^2 components match".into())
}

fn delta_m() -> Outcome {
    let entries = delta_m_check().map_err(|e| e.to_string())?;
    let bad: Vec<_> = entries.iter().filter(|e| !e.agrees).collect();
    ensure(entries.len() == 8 && bad.is_empty(), format!("mismatches {bad:?}"))?;
    Ok("8 products agree with the composite".into())
}

fn symmetric_ring() -> Outcome {
    for n in 0..=3 {
        let g = ArcRing::new(n).gram().map_err(|e| e.to_string())?;
        ensure(g.is_permutation && g.pairs_with_star, format!("n = {n}: {g:?}"))?;
    }
    Ok("Gram matrices for n <= 3 are the star permutation".into())
}

fn meander() -> Outcome {
    let start = Instant::now();
    for n in 0..=5 {
        let r = cartan_report(n);
        ensure(r.agrees, format!("n = {n}: det {} vs {}", r.determinant, r.meander_prediction))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("n <= 5 in {:.2?}", start.elapsed()))
}

/// A composite of `steps` random cups and caps starting on `2 * width` points, with closed
/// circles dropped (a circle only splits off two shifted copies of the rest).
fn random_flat(rng: &mut ChaCha8Rng, width: usize, steps: usize) -> FlatTangle {
    let mut t = FlatTangle::vert(width);
    for _ in 0..steps {
        let points = 2 * t.n_top();
        let cap = points >= 2 && (points >= 6 || rng.gen_bool(0.5));
        let s = if cap {
            FlatTangle::cap(points, rng.gen_range(0..points - 1))
        } else {
            FlatTangle::cup(points, rng.gen_range(0..=points))
        }
        .expect("elementary slice");
        t = compose(&s, &t).expect("composable");
    }
    t.remove_circles().0
}

fn tensor_ranks() -> Outcome {
    let mut pairs = 0;
    for k in 0..=2 {
        for m in 0..=2 {
            for n in 0..=2 {
                for b in basis_tangles(k, m) {
                    for a in basis_tangles(m, n) {
                        let r = tensor_rank_check(&b, &a).map_err(|e| e.to_string())?;
                        ensure(r.agrees, format!("{b} over {a}"))?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a9);
    let mut with_circles = 0;
    for _ in 0..50 {
        let total = rng.gen_range(1..=3);
        let split = rng.gen_range(0..=total);
        let width = rng.gen_range(0..=2);
        let a = random_flat(&mut rng, width, split);
        let b = random_flat(&mut rng, a.n_top(), total - split);
        let r = tensor_rank_check(&b, &a).map_err(|e| e.to_string())?;
        ensure(r.agrees, format!("random composite {b} over {a}"))?;
        with_circles += (compose(&b, &a).map_err(|e| e.to_string())?.circles() > 0) as usize;
    }
    Ok(format!("{pairs} basis pairs and 50 random composites ({with_circles} closing circles)"))
}

fn cubes_are_complexes() -> Outcome {
    let start = Instant::now();
    let items = corpus();
    for item in &items {
        ensure(item.word.crossings() <= 8, format!("{} has too many crossings", item.name))?;
        let cube = Cube::build(&item.word).map_err(|e| format!("{}: {e}", item.name))?;
        ensure(cube.squares_anticommute(), format!("{}: a square commutes", item.name))?;
        ensure(cube.complex().is_complex(), format!("{}: d^2 != 0", item.name))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} diagrams in {:.2?}", items.len(), start.elapsed()))
}

fn decategorification() -> Outcome {
    let items = corpus();
    for item in &items {
        let c = build_cube(&item.word).map_err(|e| e.to_string())?;
        let k = kauffman(&item.word).map_err(|e| e.to_string())?;
        ensure(c.euler_class() == k, format!("{}: euler class differs", item.name))?;
    }
    Ok(format!("{} diagrams", items.len()))
}

fn invariance() -> Outcome {
    let start = Instant::now();
    let r = verify_report(&Move::ALL, 6).map_err(|e| e.to_string())?;
    let bad: Vec<String> = r
        .entries
        .iter()
        .filter(|e| e.verdict != arcring::invariants::Verdict::EquivalentEvidence)
        .map(|e| format!("{} on {}", e.mv.code(), e.strands))
        .collect();
    ensure(bad.is_empty(), format!("distinct: {bad:?}"))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} move instances in context, {:.2?}", r.entries.len(), start.elapsed()))
}

fn link_pipelines() -> Outcome {
    let start = Instant::now();
    let mut trefoil_torsion = None;
    for l in links().into_iter().filter(|l| l.name != "figure-8") {
        let j = jones_report(&l.word).map_err(|e| e.to_string())?;
        ensure(j.agree, format!("{}: {} vs {}", l.name, j.state_sum, j.from_homology))?;
        let c = build_cube(&l.word).map_err(|e| e.to_string())?;
        let raw = c.homology().map_err(|e| e.to_string())?;
        let simple = c.simplify().homology().map_err(|e| e.to_string())?;
        ensure(raw == simple, format!("{}: pipelines differ", l.name))?;
        if l.name == "trefoil" {
            trefoil_torsion = Some((raw.torsion_count(), simple.torsion_count()));
        }
    }
    ensure(trefoil_torsion == Some((1, 1)), format!("trefoil torsion {trefoil_torsion:?}"))?;
    within(start, Duration::from_secs(30))?;
    Ok("unknots, unlink, Hopf and trefoil agree; trefoil has one torsion summand".into())
}

fn curl_pins() -> Outcome {
    let mut checked = 0;
    for (mv, want) in [(Move::LeftCurl, (0, 1)), (Move::RightCurl, (1, 0))] {
        let mut words: Vec<TangleWord> = vec![curl_cap(mv)];
        for k in [2, 4, 6] {
            words.push(move_pair(mv, k).map_err(|e| e.to_string())?.0);
        }
        for w in words {
            for flip in [false, true] {
                let mut w = w.clone();
                if flip {
                    w.reverse_component(0);
                }
                let o = w.orientation().map_err(|e| e.to_string())?;
                ensure((o.x, o.y) == want, format!("{mv:?} {w}: x = {}, y = {}", o.x, o.y))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} oriented curls"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Catalan counts", catalan_counts),
        ("small arc rings", small_rings),
        ("product through another idempotent", delta_m),
        ("symmetric trace form", symmetric_ring),
        ("Cartan determinant", meander),
        ("tensor product ranks", tensor_ranks),
        ("cubes square to zero", cubes_are_complexes),
        ("Euler class is the bracket", decategorification),
        ("invariance under moves", invariance),
        ("link pipelines agree", link_pipelines),
        ("curl crossing types", curl_pins),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
