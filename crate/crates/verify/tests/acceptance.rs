//! Runs every acceptance criterion, printing one PASS/FAIL line each, and
//! exits non-zero if any fails.

use gh_atom_verify::CRITERIA;

fn main() {
    let mut failed = 0;
    for (n, name, run) in CRITERIA {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {n:>2} {name}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
