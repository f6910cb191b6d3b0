//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p cayley-core --test acceptance`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cayley_core::cayley::{bidir, CayleyTable, DistanceTable};
use cayley_core::classify::{census, NormaliserMode};
use cayley_core::interval::GradedInterval;
use cayley_core::median::{brute_force_medians, interior, medians, Triangle};
use cayley_core::perm::factorial;
use cayley_core::{
    normaliser, order_isomorphic, theorem1_check, DistanceOracle, Element, GeodesicMode,
    GroupModel, Perm, Relation, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn p(n: usize, t: &str) -> Element {
    Element::Perm(Perm::parse(n, t).unwrap())
}

fn random_element(model: &GroupModel, rng: &mut ChaCha8Rng) -> Element {
    let order = factorial(model.degree().unwrap());
    model.unrank(rng.random_range(0..order)).unwrap()
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed > limit {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

/// Lattice points of the box spanned by `(0,0)` and `(a,b)`, counted per
/// L1 grade.
fn grid_profile(a: i64, b: i64) -> Vec<usize> {
    let mut out = vec![0; (a + b + 1) as usize];
    for x in 0..=a {
        for y in 0..=b {
            out[(x + y) as usize] += 1;
        }
    }
    out
}

/// Sphere sizes of the Cayley graph by a plain BFS over image arrays.
fn bfs_sphere_sizes(n: usize, gens: &[Vec<u8>]) -> Vec<u64> {
    let start: Vec<u8> = (0..n as u8).collect();
    let mut dist: HashMap<Vec<u8>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    let mut sizes = vec![1u64];
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for s in gens {
            // right multiplication: apply x first, then s
            let y: Vec<u8> = x.iter().map(|&i| s[i as usize]).collect();
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                if sizes.len() <= d as usize + 1 {
                    sizes.push(0);
                }
                sizes[d as usize + 1] += 1;
                queue.push_back(y);
            }
        }
    }
    sizes
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let o = DistanceOracle::new(GroupModel::z2()).unwrap();
    let origin = Element::Pair(0, 0);
    let line = GradedInterval::build(&o, &origin, &Element::Pair(4, 0)).unwrap();
    ensure!(line.len() == 5, "|[(0,0),(4,0)]| = {}", line.len());
    ensure!(
        line.geodesic_count() == 1,
        "Geo count {}",
        line.geodesic_count()
    );
    let square = GradedInterval::build(&o, &origin, &Element::Pair(2, 2)).unwrap();
    ensure!(square.len() == 9, "|[(0,0),(2,2)]| = {}", square.len());
    ensure!(
        square.geodesic_count() == 6,
        "Geo count {}",
        square.geodesic_count()
    );
    let grid = GradedInterval::build(&o, &origin, &Element::Pair(4, 3)).unwrap();
    let expected = grid_profile(4, 3);
    ensure!(
        grid.rank_profile() == expected,
        "profile {:?} vs grid {:?}",
        grid.rank_profile(),
        expected
    );
    ensure!(
        grid.len() == 20 && grid.length() == 7,
        "size {} length {}",
        grid.len(),
        grid.length()
    );
    within(t.elapsed(), Duration::from_secs(1), "criterion 1")?;
    Ok(format!(
        "sizes 5/9, geodesics 1/6, profile {expected:?} ({:?})",
        t.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    for n in 3..=12u64 {
        let semi = DistanceOracle::new(GroupModel::cyclic(n, false).unwrap()).unwrap();
        ensure!(
            semi.diameter().unwrap() as u64 == n - 1,
            "semigroup diam C{n}"
        );
        let two = DistanceOracle::new(GroupModel::cyclic(n, true).unwrap()).unwrap();
        ensure!(
            two.diameter().unwrap() as u64 == n / 2,
            "inverse-closed diam C{n}"
        );
        if n % 2 == 0 {
            let half = Element::Residue(n / 2);
            let geo = two
                .geodesics(
                    &two.model().identity(),
                    &half,
                    GeodesicMode::Enumerate { cap: 100 },
                )
                .unwrap();
            ensure!(
                geo.count == 2 && geo.words.len() == 2,
                "|Geo(x^{})| = {}",
                n / 2,
                geo.count
            );
            let i = GradedInterval::from_identity(&two, &half).unwrap();
            ensure!(
                i.len() as u64 == n,
                "[1,x^{}] has {} of {n} elements",
                n / 2,
                i.len()
            );
        }
    }
    within(t.elapsed(), Duration::from_secs(1), "criterion 2")?;
    Ok(format!("n = 3..12 ({:?})", t.elapsed()))
}

fn criterion_3() -> Outcome {
    let model = GroupModel::sym_circular(8).unwrap();
    let t = Instant::now();
    let table = DistanceTable::build(&model).unwrap();
    let table_time = t.elapsed();
    within(table_time, Duration::from_secs(10), "S8 table build")?;
    let spheres = table.sphere_sizes();
    let ct = CayleyTable::build(&model, table).unwrap();

    let lengths = census(&model, &ct, Relation::SameLength).unwrap();
    let hist: Vec<u64> = lengths.rows.iter().map(|r| r.count).collect();
    ensure!(
        hist.iter().sum::<u64>() == 40320,
        "length histogram sums to {}",
        hist.iter().sum::<u64>()
    );
    ensure!(
        hist == spheres,
        "histogram {hist:?} vs table spheres {spheres:?}"
    );
    let gens: Vec<Vec<u8>> = model
        .generators()
        .generators()
        .iter()
        .map(|g| g.as_perm().unwrap().images().to_vec())
        .collect();
    let independent = bfs_sphere_sizes(8, &gens);
    ensure!(
        hist == independent,
        "histogram {hist:?} vs plain BFS {independent:?}"
    );

    let sizes = census(&model, &ct, Relation::SameIntervalSize).unwrap();
    let distinct = sizes.rows.len();
    let max = sizes.rows.iter().map(|r| r.signature).max().unwrap();
    ensure!(sizes.total == 40320, "size census total {}", sizes.total);
    ensure!(distinct == 386, "{distinct} distinct interval sizes");
    ensure!(max == 4280, "maximum interval size {max}");
    within(t.elapsed(), Duration::from_secs(15 * 60), "S8 census")?;
    Ok(format!(
        "386 distinct sizes, max 4280, {} length classes; table {:?}, total {:?}",
        hist.len(),
        table_time,
        t.elapsed()
    ))
}

fn criterion_4() -> Outcome {
    let c = DistanceOracle::new(GroupModel::sym_circular(4).unwrap()).unwrap();
    let m = c.model();
    let top = m.apply_word(&m.identity(), &Word(vec![0, 2, 1])).unwrap();
    ensure!(top == p(4, "(1,3,4,2)"), "s1s3s2 = {top}");
    let left = GradedInterval::from_identity(&c, &top).unwrap().stats();
    let widest = *left.rank_profile.iter().max().unwrap();
    ensure!(widest == 3, "max rank-set {widest}");
    ensure!(
        left.max_antichain == 4,
        "max antichain {}",
        left.max_antichain
    );
    ensure!(!left.is_sperner, "Sperner flag set");

    let a = DistanceOracle::new(GroupModel::sym_adjacent(5).unwrap()).unwrap();
    let right = GradedInterval::from_identity(&a, &p(5, "(1,3,2)(4,5)")).unwrap();
    ensure!(
        right.geodesic_count() == 3,
        "geodesics {}",
        right.geodesic_count()
    );
    ensure!(
        right.max_antichain() == 2,
        "antichain {}",
        right.max_antichain()
    );
    Ok("rank-set 3 < antichain 4; geodesics 3, antichain 2".into())
}

fn criterion_5() -> Outcome {
    let a = DistanceOracle::new(GroupModel::sym_adjacent(5).unwrap()).unwrap();
    let (l13, l25) = (
        a.length(&p(5, "(1,3)")).unwrap(),
        a.length(&p(5, "(2,5)")).unwrap(),
    );
    ensure!(l13 != l25, "l((1,3)) = l((2,5)) = {l13}");
    let i13 = GradedInterval::from_identity(&a, &p(5, "(1,3)")).unwrap();
    let i35 = GradedInterval::from_identity(&a, &p(5, "(3,5)")).unwrap();
    ensure!(
        order_isomorphic(&i13, &i35),
        "[1,(1,3)] and [1,(3,5)] not isomorphic"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut orders = Vec::new();
    for n in [5, 6] {
        let o = DistanceOracle::new(GroupModel::sym_circular(n).unwrap()).unwrap();
        let m = o.model();
        let norm = normaliser(m, m.generators(), NormaliserMode::Enumerate).unwrap();
        let members = norm.members().unwrap();
        orders.push(members.len());
        for _ in 0..200 {
            let g = random_element(m, &mut rng);
            let pi = &members[rng.random_range(0..members.len())];
            ensure!(
                theorem1_check(&o, &g, pi, m.generators()).unwrap(),
                "[1,{g}] and its conjugate by {pi} differ in S{n}"
            );
        }
    }
    Ok(format!(
        "l = {l13} vs {l25}; 400 conjugations, |N(S)| = {orders:?}"
    ))
}

struct MedianRecord {
    minimizers: Vec<Element>,
    distances: Vec<u32>,
}

/// Runs criterion 6 and hands the minimiser sets to criterion 7.
fn criterion_6(records: &mut Vec<MedianRecord>) -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (n, count) in [(5, 100), (6, 30)] {
        let o = DistanceOracle::new(GroupModel::sym_circular(n).unwrap()).unwrap();
        let m = o.model();
        for _ in 0..count {
            let c: Vec<Element> = (0..3).map(|_| random_element(m, &mut rng)).collect();
            let tri = Triangle::new(m, &c[0], &c[1], &c[2]).unwrap();
            let fast = medians(&o, &tri).unwrap();
            let slow = brute_force_medians(&o, &tri).unwrap();
            ensure!(
                fast.minimizers == slow.minimizers && fast.weight == slow.weight,
                "S{n} triangle {} {} {}: interior {:?} vs whole group {:?}",
                c[0],
                c[1],
                c[2],
                fast.minimizers,
                slow.minimizers
            );
            let region = interior(&o, &tri).unwrap();
            for h in &slow.minimizers {
                let local = m.multiply(&m.inverse(&c[0]).unwrap(), h).unwrap();
                ensure!(region.contains(&local), "median {h} outside the interior");
            }
            let mut distances = Vec::new();
            for (i, a) in slow.minimizers.iter().enumerate() {
                for b in &slow.minimizers[i + 1..] {
                    distances.push(o.distance(a, b).unwrap());
                }
            }
            records.push(MedianRecord {
                minimizers: slow.minimizers,
                distances,
            });
        }
    }
    within(t.elapsed(), Duration::from_secs(300), "criterion 6")?;
    Ok(format!(
        "130 triangles, interior scan = whole-group scan ({:?})",
        t.elapsed()
    ))
}

fn criterion_7(records: &[MedianRecord]) -> Outcome {
    ensure!(!records.is_empty(), "criterion 6 produced no triangles");
    let multi: Vec<&MedianRecord> = records.iter().filter(|r| r.minimizers.len() >= 2).collect();
    for r in &multi {
        ensure!(
            r.distances.iter().all(|d| d % 2 == 0),
            "odd median distance among {:?}",
            r.minimizers
        );
    }
    let pairs: usize = multi.iter().map(|r| r.distances.len()).sum();
    Ok(format!(
        "{} triangles with ties, {pairs} median pairs, all even",
        multi.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s7 = DistanceOracle::new(GroupModel::sym_circular(7).unwrap()).unwrap();
    for _ in 0..1000 {
        let g = random_element(s7.model(), &mut rng);
        let h = random_element(s7.model(), &mut rng);
        let by_table = s7.distance(&g, &h).unwrap();
        let by_search = bidir::distance(s7.model(), &g, &h).unwrap();
        ensure!(
            by_table == by_search,
            "d({g},{h}): table {by_table}, search {by_search}"
        );
    }

    let s5 = DistanceOracle::new(GroupModel::sym_circular(5).unwrap()).unwrap();
    let all: Vec<Element> = s5.model().elements().unwrap().collect();
    let index: HashMap<&Element, usize> = all.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let d: Vec<Vec<u32>> = all
        .iter()
        .map(|g| all.iter().map(|h| s5.distance(g, h).unwrap()).collect())
        .collect();
    let mut intervals = 0;
    for (gi, g) in all.iter().enumerate() {
        for (hi, h) in all.iter().enumerate() {
            if d[gi][hi] > 4 {
                continue;
            }
            let i = GradedInterval::build(&s5, g, h).unwrap();
            let scanned: BTreeSet<usize> = (0..all.len())
                .filter(|&x| d[gi][x] + d[x][hi] == d[gi][hi])
                .collect();
            let built: BTreeSet<usize> = i.elements().map(|x| index[x]).collect();
            ensure!(scanned == built, "membership differs on [{g},{h}]");
            intervals += 1;
        }
    }
    Ok(format!(
        "1000 S7 pairs agree; {intervals} S5 intervals match the scan"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let o = DistanceOracle::new(GroupModel::sym_circular(6).unwrap()).unwrap();
    let m = o.model();
    let mut violations = 0;
    for _ in 0..1000 {
        let (g, h, k) = (
            random_element(m, &mut rng),
            random_element(m, &mut rng),
            random_element(m, &mut rng),
        );
        let d = o.distance(&g, &h).unwrap();
        let kg = m.multiply(&k, &g).unwrap();
        let kh = m.multiply(&k, &h).unwrap();
        if o.distance(&kg, &kh).unwrap() != d {
            violations += 1;
        }
        // every generator is a transposition, so word length tracks the sign
        let sign = g.as_perm().unwrap().sign();
        let l = o.length(&g).unwrap();
        if l.is_multiple_of(2) != (sign == 1) {
            violations += 1;
        }
    }
    ensure!(violations == 0, "{violations} violations");
    Ok("1000 samples, 0 violations".into())
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
    match outcome {
        Ok(detail) => {
            println!("criterion {id} PASS  {name}: {detail}");
            true
        }
        Err(why) => {
            println!("criterion {id} FAIL  {name}: {why}");
            false
        }
    }
}

fn main() {
    let mut records = Vec::new();
    let results = [
        run(1, "Z2 fixtures", criterion_1),
        run(2, "cyclic fixtures", criterion_2),
        run(3, "S8 census", criterion_3),
        run(4, "non-Sperner fixtures", criterion_4),
        run(5, "generator symmetries", criterion_5),
        run(6, "median interior", || criterion_6(&mut records)),
        run(7, "median parity", || criterion_7(&records)),
        run(8, "oracle equivalence", criterion_8),
        run(9, "left invariance and parity", criterion_9),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
