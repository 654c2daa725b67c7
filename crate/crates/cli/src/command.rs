use std::str::FromStr;

use thiserror::Error;

use arthur_core::memory::EmotionLabel;

pub const USAGE: &str = "\
commands:
  <text>                 say something to Arthur
  /name [person]         declare who is in front of the camera (empty: nobody known)
  /emotion <label>       declare your emotion (anger disgust doubt fear joy sadness surprise worry neutral)
  /teach <term> <image>  show Arthur a picture of a thing
  /sleep                 consolidate memory
  /tick [n]              advance the clock by n ticks (default 1)
  /stm                   show short-term memory
  /ltm                   show long-term memory
  /quit                  save and exit";

#[derive(Debug, Clone, PartialEq)]
pub enum ReplCommand {
    Say(String),
    Name(Option<String>),
    Emotion(EmotionLabel),
    Teach { term: String, image: String },
    Sleep,
    Tick(u64),
    ShowStm,
    ShowLtm,
    Quit,
}

#[derive(Debug, Error, PartialEq)]
pub enum CommandError {
    #[error("unknown command /{0}")]
    Unknown(String),
    #[error("/{command}: {message}")]
    BadArgs { command: String, message: String },
}

impl ReplCommand {
    /// Parses one input line. Blank lines and `#` comments yield `None`.
    pub fn parse(line: &str) -> Result<Option<ReplCommand>, CommandError> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(None);
        }
        let Some(rest) = line.strip_prefix('/') else {
            return Ok(Some(ReplCommand::Say(line.to_string())));
        };
        let (name, args) = rest
            .split_once(char::is_whitespace)
            .map_or((rest, ""), |(n, a)| (n, a.trim()));
        let bad = |message: &str| CommandError::BadArgs {
            command: name.to_string(),
            message: message.to_string(),
        };
        let no_args = |cmd: ReplCommand| {
            if args.is_empty() {
                Ok(cmd)
            } else {
                Err(bad("takes no arguments"))
            }
        };
        let cmd = match name {
            "name" => ReplCommand::Name((!args.is_empty()).then(|| args.to_string())),
            "emotion" => ReplCommand::Emotion(
                EmotionLabel::from_str(args).map_err(|_| bad("expected an emotion label"))?,
            ),
            "teach" => {
                let (term, image) = args
                    .rsplit_once(char::is_whitespace)
                    .ok_or_else(|| bad("usage: /teach <term> <image>"))?;
                ReplCommand::Teach {
                    term: term.trim().to_string(),
                    image: image.to_string(),
                }
            }
            "sleep" => no_args(ReplCommand::Sleep)?,
            "tick" => ReplCommand::Tick(if args.is_empty() {
                1
            } else {
                args.parse().map_err(|_| bad("expected a tick count"))?
            }),
            "stm" => no_args(ReplCommand::ShowStm)?,
            "ltm" => no_args(ReplCommand::ShowLtm)?,
            "quit" | "exit" => no_args(ReplCommand::Quit)?,
            other => return Err(CommandError::Unknown(other.to_string())),
        };
        Ok(Some(cmd))
    }
}
