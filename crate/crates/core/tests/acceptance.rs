//! Acceptance criteria 1–10, exact comparisons only. Prints one line per
//! criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use affine_hall::catalog::Catalog;
use affine_hall::checks;
use affine_hall::exec::Exec;
use affine_hall::field::Field;
use affine_hall::hall::Hall;
use affine_hall::monomials;
use affine_hall::quiver::{DimVec, Quiver};
use affine_hall::ring::{hook_length_dimension, kostka, partitions, perm_module_multiplicities};
use affine_hall::strata;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const EXEC: Exec = Exec::Parallel;

fn kronecker() -> Arc<Quiver> {
    Arc::new(Quiver::kronecker())
}

fn catalog(q: usize, b: i64) -> Arc<Catalog> {
    Arc::new(Catalog::build(kronecker(), Field::new(q).unwrap(), &DimVec(vec![b, b]), EXEC).unwrap())
}

fn fail_if(failures: Vec<String>, ok: String) -> Outcome {
    if failures.is_empty() {
        Ok(ok)
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    }
}

fn euler() -> Outcome {
    let mut failures = Vec::new();
    for quiver in [kronecker(), Arc::new(Quiver::affine_a(2))] {
        for q in [2, 3] {
            let r = checks::euler_identity(&quiver, q, 200, 3, 11 + q as u64, EXEC).map_err(|e| e.to_string())?;
            failures.extend(r.failures);
        }
    }
    fail_if(failures, "800 pairs on Kronecker and A2~ at q=2,3".into())
}

fn bgp() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for quiver in [kronecker(), Arc::new(Quiver::affine_a(2))] {
        for q in [2, 3] {
            let r = checks::bgp_identity(&quiver, q, 100, 3, 21 + q as u64, EXEC).map_err(|e| e.to_string())?;
            cases += r.sinks.len() * r.per_sink;
            failures.extend(r.failures);
        }
    }
    fail_if(failures, format!("{cases} modules"))
}

fn flag_formulas() -> Outcome {
    let quiver = kronecker();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let words: Vec<_> = (0..20).map(|_| checks::random_large_word(2, &DimVec(vec![3, 3]), &mut rng)).collect();
    let rows = checks::flag_formulas(&quiver, &words, &[2, 3, 4, 5], EXEC).map_err(|e| e.to_string())?;
    let failures: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{r:?}")).collect();
    fail_if(failures, format!("{} words at q=2,3,4,5", rows.len()))
}

fn word_products() -> Outcome {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for q in [2, 3] {
        let hall = Hall::new(catalog(q, 2), EXEC);
        let r = checks::word_checks(&hall, &DimVec(vec![2, 2]), 50, 41 + q as u64).map_err(|e| e.to_string())?;
        summary.push(format!("q={q}: {} words, {} splits, {} triples", r.words, r.splits, r.associativity));
        failures.extend(r.failures);
    }
    fail_if(failures, summary.join("; "))
}

fn kostka_numbers() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for m in 1..=5 {
        for lam in partitions(m) {
            let mult = perm_module_multiplicities(&lam).map_err(|e| e.to_string())?;
            let mut dim = 0;
            for mu in partitions(m) {
                let k = kostka(&mu, &lam).map_err(|e| e.to_string())?;
                if mult.get(&mu).copied().unwrap_or(0) != k {
                    failures.push(format!("multiplicity of {mu:?} in M^{lam:?}"));
                }
                dim += k * hook_length_dimension(&mu);
            }
            if dim != lam.multinomial() {
                failures.push(format!("Σ K f for {lam:?}"));
            }
            n += 1;
        }
    }
    fail_if(failures, format!("{n} partitions"))
}

fn resolution() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for q in [2, 3] {
        let c = catalog(q, 3);
        for k in 1..=3 {
            for idx in strata::enumerate_delta(&c, &DimVec(vec![k, k])).map_err(|e| e.to_string())? {
                let r = monomials::verify_resolution(&c, &idx, None, EXEC).map_err(|e| e.to_string())?;
                n += 1;
                if !r.pass {
                    failures.push(format!("q={q} {}: {:?}", r.index, r.counterexamples));
                }
            }
        }
    }
    fail_if(failures, format!("{n} indices"))
}

fn triangularity() -> Outcome {
    let mut failures = Vec::new();
    for q in [2, 3] {
        let c = catalog(q, 3);
        for k in 1..=3 {
            let r = monomials::verify_triangularity(&c, &DimVec(vec![k, k]), EXEC).map_err(|e| e.to_string())?;
            if !r.pass() {
                failures.push(format!("q={q} ν={k}δ: {:?}", r.counterexamples));
            }
        }
    }
    fail_if(failures, "δ, 2δ, 3δ at q=2,3".into())
}

fn hall_fit() -> Outcome {
    let r = checks::hall_fit(&kronecker(), &DimVec(vec![2, 2]), &[2, 3, 5], 7, EXEC).map_err(|e| e.to_string())?;
    if r.triples == 0 {
        return Err("no triples".into());
    }
    fail_if(r.failures, format!("{} Hall numbers, max degree {}", r.triples, r.max_degree))
}

fn delta_sizes() -> Outcome {
    let mut failures = Vec::new();
    for q in [2, 3] {
        let c = catalog(q, 2);
        for (k, size) in [(1, 2), (2, 6)] {
            let r = checks::delta_check(&c, &DimVec(vec![k, k])).map_err(|e| e.to_string())?;
            if !r.pass() || r.enumerated.len() != size {
                failures.push(format!("q={q} ν={k}δ: {:?} vs {:?}", r.enumerated, r.exhaustive));
            }
        }
    }
    fail_if(failures, "|Δ_δ| = 2, |Δ_2δ| = 6".into())
}

fn symbolic() -> Outcome {
    let mut failures = Vec::new();
    let mut relations = 0;
    for q in [2, 3] {
        let hall = Hall::new(catalog(q, 3), EXEC);
        let r = checks::symbolic_check(&hall, &DimVec(vec![3, 3]), 10, 51 + q as u64).map_err(|e| e.to_string())?;
        relations += r.serre.iter().chain(&r.random).map(|c| c.relations).sum::<usize>();
        if !r.pass() {
            failures.push(format!("q={q}: {:?}", r.serre.iter().chain(&r.random).filter(|c| !c.pass()).collect::<Vec<_>>()));
        }
    }
    let rows = checks::a2_correction(4).map_err(|e| e.to_string())?;
    failures.extend(rows.iter().filter(|r| !r.pass).map(|r| format!("A2 correction at {}", r.weight)));
    fail_if(failures, format!("{relations} symbolic relations hold in the Hall algebra; {} A2 weight spaces corrected", rows.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Euler identity", euler),
        ("BGP identity", bgp),
        ("flag formulas", flag_formulas),
        ("word products", word_products),
        ("Kostka multiplicities", kostka_numbers),
        ("resolution fibers", resolution),
        ("triangularity", triangularity),
        ("Hall polynomials", hall_fit),
        ("index set sizes", delta_sizes),
        ("symbolic/Hall consistency", symbolic),
    ];
    let mut ok = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                ok = false;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
