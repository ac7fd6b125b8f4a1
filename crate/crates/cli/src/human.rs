//! A person at the terminal playing the environment.

use cl_core::epm::Environment;
use cl_core::game::{legal_moves, GameRef, Labmove, MoveCaps, Player, SPADE};
use std::io::{self, BufRead, Write};

pub struct HumanEnv {
    input: Box<dyn BufRead + Send>,
    output: Box<dyn Write + Send>,
    caps: MoveCaps,
    done: bool,
}

impl HumanEnv {
    pub fn stdio(caps: MoveCaps) -> Self {
        HumanEnv { input: Box::new(io::BufReader::new(io::stdin())), output: Box::new(io::stderr()), caps, done: false }
    }

    fn say(&mut self, text: &str) {
        let _ = writeln!(self.output, "{text}");
    }

    /// Why `mv` may not be played by the environment now.
    fn reason(&self, g: &GameRef, run: &[Labmove], mv: &str) -> String {
        if mv.contains(SPADE) {
            return format!("{SPADE} is never a legal move");
        }
        if g.classify_move(run, &Labmove::machine(mv)).unwrap_or(false) {
            return format!("{mv:?} is a machine move here");
        }
        format!("{mv:?} is not a legal environment move after {} moves", run.len())
    }
}

fn show_run(run: &[Labmove]) -> String {
    if run.is_empty() {
        return "<>".into();
    }
    let moves: Vec<String> = run.iter().map(|l| l.to_string()).collect();
    format!("<{}>", moves.join(", "))
}

impl Environment for HumanEnv {
    fn on_permission(&mut self, g: &GameRef, run: &[Labmove]) -> Option<String> {
        if self.done {
            return None;
        }
        let hints: Vec<String> =
            legal_moves(g, run, Some(Player::Env), &self.caps).into_iter().map(|l| l.mv).collect();
        self.say(&format!("position: {}", show_run(run)));
        self.say(&format!("legal moves: {}", if hints.is_empty() { "none".into() } else { hints.join("  ") }));
        loop {
            let _ = write!(self.output, "B> ");
            let _ = self.output.flush();
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
            }
            let mv = line.trim_end_matches(['\n', '\r']);
            match mv.trim() {
                "" | "pass" => return None,
                "stop" | "quit" => {
                    self.done = true;
                    return None;
                }
                _ => {}
            }
            let mv = mv.strip_prefix("move ").unwrap_or(mv);
            if g.classify_move(run, &Labmove::env(mv)).unwrap_or(false) {
                return Some(mv.to_string());
            }
            let why = self.reason(g, run, mv);
            self.say(&format!("rejected: {why}"));
        }
    }

    fn exhausted(&self) -> bool {
        self.done
    }
}
