use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn arthur(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arthur"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ARTHUR_CHATBOT_URL")
        .env_remove("ARTHUR_LTM_PATH")
        .output()
        .expect("run arthur")
}

fn run_script(name: &str, dir: &Path) -> (String, Vec<u8>) {
    let ltm = dir.join(format!("{name}.jsonl"));
    let script = scenario(name);
    let out = arthur(
        &[
            "--script",
            script.to_str().unwrap(),
            "--ltm",
            ltm.to_str().unwrap(),
        ],
        dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    (
        String::from_utf8(out.stdout).unwrap(),
        fs::read(ltm).unwrap(),
    )
}

#[test]
fn introduction_script_greets_then_recognises() {
    let dir = tempfile::tempdir().unwrap();
    let (transcript, _) = run_script("introduction.txt", dir.path());
    let first = transcript
        .find("Hello stranger! May I know your name?")
        .unwrap();
    let again = transcript.find("Greetings Knob!").unwrap();
    assert!(first < again);
    assert!(transcript.contains("Knob is 31 years old."));
    assert!(transcript.contains("[sleeping]"));
}

#[test]
fn learning_script_learns_cellphone() {
    let dir = tempfile::tempdir().unwrap();
    let (transcript, ltm) = run_script("learning.txt", dir.path());
    let no = transcript.find("No, I do not!").unwrap();
    let taught = transcript.find("Now I know what a cellphone is").unwrap();
    let yes = transcript
        .find("Yes, I know what a cellphone is! Here is the picture you showed me: cellphone.png")
        .unwrap();
    assert!(no < taught && taught < yes);
    assert!(transcript.contains("Knob is 31 years old."));
    let ltm = String::from_utf8(ltm).unwrap();
    assert!(ltm.contains(r#""path":"cellphone.png""#));
}

#[test]
fn scripts_are_deterministic() {
    for name in ["introduction.txt", "learning.txt"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert_eq!(
            run_script(name, a.path()),
            run_script(name, b.path()),
            "{name}"
        );
    }
}

#[test]
fn memory_carries_over_between_runs() {
    let dir = tempfile::tempdir().unwrap();
    let ltm = dir.path().join("m.jsonl");
    let first = dir.path().join("first.txt");
    fs::write(&first, "Hello\nKnob\nI am 31\n/sleep\n").unwrap();
    let second = dir.path().join("second.txt");
    fs::write(&second, "/name Knob\nhow old is knob\n").unwrap();
    for script in [&first, &second] {
        let out = arthur(
            &[
                "--script",
                script.to_str().unwrap(),
                "--ltm",
                ltm.to_str().unwrap(),
            ],
            dir.path(),
        );
        assert!(out.status.success());
        if script == &second {
            let text = String::from_utf8(out.stdout).unwrap();
            assert!(text.contains("Greetings Knob!"), "{text}");
            assert!(text.contains("Knob is 31 years old."), "{text}");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ltm = dir.path().join("m.jsonl");
    let ltm_arg = ltm.to_str().unwrap();

    let out = arthur(&["--script", "missing.txt", "--ltm", ltm_arg], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "Hello\n/dance\n").unwrap();
    let out = arthur(
        &["--script", bad.to_str().unwrap(), "--ltm", ltm_arg],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown command /dance"));

    let broken = dir.path().join("broken.jsonl");
    fs::write(&broken, "{not json\n").unwrap();
    let quit = dir.path().join("quit.txt");
    fs::write(&quit, "/quit\n").unwrap();
    let out = arthur(
        &[
            "--script",
            quit.to_str().unwrap(),
            "--ltm",
            broken.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    let out = arthur(
        &["--script", quit.to_str().unwrap(), "--ltm", ltm_arg],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(ltm.exists());
}

#[test]
fn interactive_session_saves_on_quit() {
    use std::io::Write;
    use std::process::Stdio;

    let dir = tempfile::tempdir().unwrap();
    let ltm = dir.path().join("m.jsonl");
    let mut child = Command::new(env!("CARGO_BIN_EXE_arthur"))
        .args(["--ltm", ltm.to_str().unwrap()])
        .current_dir(dir.path())
        .env_remove("ARTHUR_CHATBOT_URL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"/bogus\nHello\nKnob\n/quit\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("usage") || text.contains("commands:"));
    assert!(text.contains("Nice to meet you, Knob!"));
    assert!(fs::read_to_string(&ltm)
        .unwrap()
        .contains(r#""name":"Knob""#));
}

#[test]
fn config_file_sets_tick_mode_and_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("arthur.conf");
    fs::write(
        &cfg,
        "tick_mode = turns\nshow_thresholds = true\nltm = from_config.jsonl\n",
    )
    .unwrap();
    let script = dir.path().join("s.txt");
    fs::write(&script, "Hello\n/tick 9\n/stm\n").unwrap();
    let out = arthur(
        &[
            "--config",
            cfg.to_str().unwrap(),
            "--script",
            script.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(below threshold)"), "{text}");
    assert!(dir.path().join("from_config.jsonl").exists());
}
