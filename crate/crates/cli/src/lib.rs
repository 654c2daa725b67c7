//! Terminal front-end: an interactive REPL and a non-interactive script
//! runner that share one command set.

mod command;

use std::io::{self, BufRead, Write};

use thiserror::Error;

use arthur_core::dialogue::{AgentReply, DialogueState, Phase, TurnInput};
use arthur_core::memory::{EmotionLabel, ACTIVATION_THRESHOLD, STM_CAPACITY};
use arthur_core::Agent;

pub use command::{CommandError, ReplCommand, USAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}: {source}")]
    Command {
        line: usize,
        #[source]
        source: CommandError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One conversation with the agent plus the declared camera inputs.
#[derive(Debug)]
pub struct Repl {
    agent: Agent,
    state: DialogueState,
    person: Option<String>,
    emotion: EmotionLabel,
    show_thresholds: bool,
}

fn print_reply(out: &mut dyn Write, reply: &AgentReply) -> io::Result<()> {
    writeln!(out, "Arthur: {} [{}]", reply.text, reply.expression)
}

impl Repl {
    pub fn new(agent: Agent) -> Self {
        Repl {
            agent,
            state: DialogueState::new(),
            person: None,
            emotion: EmotionLabel::Neutral,
            show_thresholds: false,
        }
    }

    pub fn with_thresholds(mut self, show: bool) -> Self {
        self.show_thresholds = show;
        self
    }

    pub fn agent(&self) -> &Agent {
        &self.agent
    }

    pub fn into_agent(self) -> Agent {
        self.agent
    }

    pub fn execute(&mut self, cmd: ReplCommand, out: &mut dyn Write) -> io::Result<Flow> {
        match cmd {
            ReplCommand::Say(text) => {
                let input = TurnInput {
                    declared_person: self.person.clone(),
                    text,
                    declared_emotion: self.emotion,
                    attached_image: None,
                };
                self.turn(input, out)?;
            }
            ReplCommand::Name(person) => {
                self.person = person;
                let reply = self.agent.identify(&mut self.state, self.person.as_deref());
                print_reply(out, &reply)?;
            }
            ReplCommand::Emotion(label) => {
                self.emotion = label;
                writeln!(out, "(emotion: {})", label.as_str())?;
            }
            ReplCommand::Teach { term, image } => {
                let pending = match &self.state.phase {
                    Phase::OfferImage(t) | Phase::AwaitImage(t) => t.eq_ignore_ascii_case(&term),
                    _ => false,
                };
                if pending {
                    let input = TurnInput {
                        declared_person: self.person.clone(),
                        text: String::new(),
                        declared_emotion: self.emotion,
                        attached_image: Some(image),
                    };
                    self.turn(input, out)?;
                } else {
                    match self.agent.teach(&term, &image) {
                        Ok(reply) => print_reply(out, &reply)?,
                        Err(e) => writeln!(out, "error: {e}")?,
                    }
                }
            }
            ReplCommand::Sleep => self.sleep(out)?,
            ReplCommand::Tick(n) => {
                self.agent.tick(n);
                writeln!(
                    out,
                    "(ticked {n}, elapsed {})",
                    self.agent.memory().elapsed_ticks()
                )?;
            }
            ReplCommand::ShowStm => self.show_stm(out)?,
            ReplCommand::ShowLtm => self.show_ltm(out)?,
            ReplCommand::Quit => return Ok(Flow::Quit),
        }
        Ok(Flow::Continue)
    }

    fn turn(&mut self, input: TurnInput, out: &mut dyn Write) -> io::Result<()> {
        match self.agent.turn(&mut self.state, input) {
            Ok(reply) => print_reply(out, &reply),
            Err(e) => writeln!(out, "error: {e}"),
        }
    }

    fn sleep(&mut self, out: &mut dyn Write) -> io::Result<()> {
        let (reply, report) = self.agent.sleep();
        print_reply(out, &reply)?;
        if report.is_empty() {
            return writeln!(out, "  nothing to consolidate");
        }
        for (id, before, after) in &report.reduced {
            writeln!(out, "  reduced {id}: {before:.6} -> {after:.6}")?;
        }
        for id in &report.forgotten_resources {
            writeln!(out, "  forgot resource {id}")?;
        }
        for id in &report.forgotten_events {
            writeln!(out, "  forgot event {id}")?;
        }
        for name in &report.forgotten_people {
            writeln!(out, "  forgot person {name}")?;
        }
        Ok(())
    }

    fn show_stm(&self, out: &mut dyn Write) -> io::Result<()> {
        let memory = self.agent.memory();
        let stm = memory.stm();
        writeln!(
            out,
            "STM {}/{} (ticks since sleep {})",
            stm.len(),
            STM_CAPACITY,
            stm.tick_counter()
        )?;
        for slot in stm.slots() {
            let Some(r) = memory.ltm().resource(slot.resource_id) else {
                continue;
            };
            let mark = if self.show_thresholds && slot.activation < ACTIVATION_THRESHOLD {
                " (below threshold)"
            } else {
                ""
            };
            writeln!(
                out,
                "  {} {} activation={:.6} weight={:.6}{}",
                r.id,
                r.information.summary(),
                slot.activation,
                r.weight,
                mark
            )?;
        }
        Ok(())
    }

    fn show_ltm(&self, out: &mut dyn Write) -> io::Result<()> {
        let ltm = self.agent.memory().ltm();
        writeln!(
            out,
            "LTM {} events, {} resources, {} people",
            ltm.event_count(),
            ltm.resource_count(),
            ltm.people().count()
        )?;
        for event in ltm.events() {
            let items: Vec<String> = ltm
                .event_resources(event)
                .map(|r| format!("{}({:.6})", r.information.summary(), r.weight))
                .collect();
            writeln!(
                out,
                "  {} {:?} {} polarity={:.3} [{}]",
                event.id,
                event.event_type,
                event.emotion.as_str(),
                event.polarity,
                items.join(", ")
            )?;
        }
        for person in ltm.people() {
            writeln!(
                out,
                "  person {} (met in {})",
                person.name, person.intro_event
            )?;
        }
        Ok(())
    }
}

/// Runs every line of a script, echoing each command before its output.
/// Stops at the first line that is not a valid command.
pub fn run_script(
    repl: &mut Repl,
    input: impl BufRead,
    out: &mut dyn Write,
) -> Result<(), ScriptError> {
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let cmd = ReplCommand::parse(&line).map_err(|source| ScriptError::Command {
            line: idx + 1,
            source,
        })?;
        let Some(cmd) = cmd else { continue };
        writeln!(out, "> {}", line.trim())?;
        if repl.execute(cmd, out)? == Flow::Quit {
            break;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads commands until `/quit` or end of input. Bad commands print usage
/// and the loop goes on.
pub fn run_interactive(
    repl: &mut Repl,
    input: impl BufRead,
    out: &mut dyn Write,
) -> io::Result<()> {
    write!(out, "you> ")?;
    out.flush()?;
    for line in input.lines() {
        match ReplCommand::parse(&line?) {
            Ok(None) => {}
            Ok(Some(cmd)) => {
                if repl.execute(cmd, out)? == Flow::Quit {
                    break;
                }
            }
            Err(e) => writeln!(out, "error: {e}\n{USAGE}")?,
        }
        write!(out, "you> ")?;
        out.flush()?;
    }
    writeln!(out)?;
    Ok(())
}
