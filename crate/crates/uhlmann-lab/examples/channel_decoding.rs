//! Decoding a channel with the Uhlmann transformation of its complementary
//! channel. The decoder's entanglement fidelity is never below the
//! decoupling fidelity.
//!
//! cargo run -p uhlmann-lab --example channel_decoding

use uhlmann_lab::qcore::random::random_unitary;
use uhlmann_lab::qcore::{ChannelDesc, Seed};
use uhlmann_lab::shannon::{channel_from_json, decoder_from_uhlmann, decoupling_fidelity};

fn report(name: &str, ch: &ChannelDesc) {
    let r = decoder_from_uhlmann(ch).unwrap();
    println!("{name:<28} decoupling {:.6}  decoded {:.6}", decoupling_fidelity(ch).unwrap(), r.fidelity);
}

fn main() {
    report("random unitary (d = 4)", &ChannelDesc::from_unitary(random_unitary(4, Seed(1)).unwrap()).unwrap());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/cnot-leak.json");
    report("CNOT copy to environment", &channel_from_json(&std::fs::read_to_string(path).unwrap()).unwrap());
    for env in [1, 2, 4] {
        let u = random_unitary(2 * env, Seed(10 + env as u64)).unwrap();
        report(&format!("random, env dim {env}"), &ChannelDesc::new(u, 2, env, 0, 2, env).unwrap());
    }
}
