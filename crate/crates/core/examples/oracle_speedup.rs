use std::time::Instant;
use vistri::harness::{generate_query_sets, random_map, MapParams};
use vistri::oracle::Oracle;
use vistri::{EngineConfig, VisEngine};

fn main() {
    let env = random_map(0, &MapParams::desk(0));
    let engine = VisEngine::new(env.clone(), EngineConfig::default()).unwrap();
    let sets = generate_query_sets(&env, engine.mesh(), 100, 0);
    let o = Oracle::new(&env);
    for s in &sets {
        let t = Instant::now();
        for &q in &s.points {
            let _ = engine.visibility_region(q, None);
        }
        let te = t.elapsed();
        let t = Instant::now();
        for &q in &s.points {
            let _ = o.visibility_polygon(q);
        }
        let to = t.elapsed();
        println!("{:?}: engine {:?}/q oracle {:?}/q", s.kind, te / 100, to / 100);
    }
}
