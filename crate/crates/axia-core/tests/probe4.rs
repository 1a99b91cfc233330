use axia_core::meta::{accuracy_at, MetaParams};
use axia_core::methods::{Context, MethodSpec};
use axia_core::table::synth;

#[test]
#[ignore]
fn probe_criterion4() {
    let params = MetaParams::default(); // k=50, level 0.95, paper rule, seed 0
    let mut eva_pass = 0;
    let mut eva_total = 0;
    let mut rct_pass = 0;
    let mut obs_pass = 0;
    let mut obs_total = 0;
    for task in 1u8..=6 {
        let table = synth(task, 0).unwrap();
        let ctx = Context::new(&table);
        for obj in 0..table.objects().len() {
            for idx in 0..table.indexes().len() {
                for spec_str in ["eva", "rct"] {
                    let spec = MethodSpec::parse(spec_str).unwrap();
                    let mut best: f64 = 0.0;
                    for budget in [10u64, 20, 30, 40, 60] {
                        if let Ok(acc) = accuracy_at(&spec, &ctx, obj, idx, budget, &params) {
                            best = best.max(acc);
                        }
                    }
                    if spec_str == "eva" {
                        eva_total += 1;
                        if best >= 0.9 { eva_pass += 1; } else {
                            eprintln!("eva MISS task {task} {} {} best {best:.2}", table.objects()[obj], table.indexes()[idx]);
                        }
                    } else if best >= 0.9 { rct_pass += 1; } else {
                        eprintln!("rct MISS task {task} {} {} best {best:.2}", table.objects()[obj], table.indexes()[idx]);
                    }
                }
                if task <= 3 {
                    obs_total += 1;
                    let spec = MethodSpec::parse("obs").unwrap();
                    let acc = accuracy_at(&spec, &ctx, obj, idx, 100, &params).unwrap();
                    if acc <= 0.6 { obs_pass += 1; } else {
                        eprintln!("obs HIGH task {task} {} {} acc {acc:.2}", table.objects()[obj], table.indexes()[idx]);
                    }
                }
            }
        }
        eprintln!("-- task {task} done");
    }
    eprintln!("eva {eva_pass}/{eva_total}  rct {rct_pass}/{eva_total}  obs<=0.6 {obs_pass}/{obs_total}");
}
