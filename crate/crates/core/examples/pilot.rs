//! Scratch probe for training dynamics (not part of the shipped surface).

use std::path::Path;

use mplex_bandit::embed::{
    compare_finals, run_experiment, ExperimentPlan, LossMetric, SamplerKind, TrainConfig, Trainer,
};
use mplex_bandit::graph::{build_synthetic, load_edge_list, make_split, SyntheticKind};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("conc");
    let epochs: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(150);
    let lr: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let dim: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(32);
    let negs: usize = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(2);

    let ckm = load_edge_list(Path::new("data/ckm.edges")).unwrap().network;
    let vickers = load_edge_list(Path::new("data/vickers.edges"))
        .unwrap()
        .network;

    if mode == "dist" {
        // full-information view: layer 0's distance to every neighbor
        let net = build_synthetic(SyntheticKind::RandInternship, &ckm, 0).unwrap();
        let split = make_split(&net, 5, 0).unwrap();
        let cfg = TrainConfig {
            dim,
            learning_rate: lr,
            epochs,
            negatives_per_positive: negs,
            metric: LossMetric::Euclidean,
            sampler: SamplerKind::Bandit,
            seed: 0,
        };
        let mut trainer = Trainer::new(&net, &split, 0, cfg).unwrap();
        println!("similarities: layer1=0.9 layer2=0.1 layer3=0.1 layer4=0.05 layer5=0.01");
        for epoch in 1..=epochs {
            trainer.train_epoch().unwrap();
            if epoch % (epochs / 15).max(1) == 0 {
                let t = trainer.tables();
                let m0 = t.layer_mean(0);
                let e: Vec<f64> = (1..6)
                    .map(|j| {
                        mplex_bandit::embed::euclidean_loss(&m0, &t.layer_mean(j)).unwrap()
                    })
                    .collect();
                let c: Vec<f64> = (1..6)
                    .map(|j| mplex_bandit::embed::cosine_loss(&m0, &t.layer_mean(j)).unwrap())
                    .collect();
                let (_, p) = trainer.sampler_distribution(0);
                println!(
                    "ep {epoch:4}: euclid={} cos={} p={}",
                    e.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" "),
                    c.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" "),
                    p.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" "),
                );
            }
        }
        return;
    }

    if mode == "conc" {
        // criterion-6 style: final probability on the 0.9-similar arm of layer 0
        for metric in [LossMetric::Euclidean, LossMetric::Cosine] {
            let mut hits = 0;
            let mut probs = Vec::new();
            for seed in 0..10u64 {
                let net = build_synthetic(SyntheticKind::RandInternship, &ckm, seed).unwrap();
                let split = make_split(&net, 5, seed).unwrap();
                let cfg = TrainConfig {
                    dim,
                    learning_rate: lr,
                    epochs,
                    negatives_per_positive: negs,
                    metric,
                    sampler: SamplerKind::Bandit,
                    seed,
                };
                let mut trainer = Trainer::new(&net, &split, 0, cfg).unwrap();
                for _ in 0..epochs {
                    trainer.train_epoch().unwrap();
                }
                let (arms, p) = trainer.sampler_distribution(0);
                // 0.9-similar layer is layer index 1 → arm 0 of layer 0
                assert_eq!(arms[0], 1);
                probs.push(p[0]);
                if p[0] >= 0.4 {
                    hits += 1;
                }
            }
            println!(
                "{metric} e={epochs} lr={lr} d={dim} k={negs}: hits(p>=0.4)={hits}/10 probs={:?}",
                probs.iter().map(|p| (p * 100.0).round() / 100.0).collect::<Vec<_>>()
            );
        }
    } else {
        // criterion-7 style: paired AUC, bandit vs uniform
        for (name, kind, source) in [
            ("small-3-layers", SyntheticKind::Small3Layers, &vickers),
            ("rand-internship", SyntheticKind::RandInternship, &ckm),
        ] {
            let net = build_synthetic(kind, source, 0).unwrap();
            let cfg = TrainConfig {
                dim,
                learning_rate: lr,
                epochs,
                negatives_per_positive: negs,
                metric: LossMetric::Euclidean,
                sampler: SamplerKind::Bandit,
                seed: 0,
            };
            let plan = ExperimentPlan {
                trials: 10,
                folds: 5,
                samplers: vec![SamplerKind::Bandit, SamplerKind::Uniform],
                record_epochs: false,
            };
            let start = std::time::Instant::now();
            let result = run_experiment(&net, &cfg, &plan).unwrap();
            let cmp = compare_finals(&result.finals, SamplerKind::Bandit, SamplerKind::Uniform);
            println!(
                "{name}: bandit={:.4} uniform={:.4} wins={}/{} ties={} p={:.4} ({:.1?})",
                cmp.mean_auc_a,
                cmp.mean_auc_b,
                cmp.wins_a,
                cmp.wins_a + cmp.wins_b,
                cmp.ties,
                cmp.p_value,
                start.elapsed(),
            );
        }
    }
}
