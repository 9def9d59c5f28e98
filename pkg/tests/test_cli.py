import io
import json
import os

import pandas as pd
import pytest

from config.settings import Config
from main import main

TINY_CONFIG = """# küçük model
model.embed_dim=8
model.hidden_dim=8
model.attention_dim=8
model.maxout_proj_dim=8
model.encoder_channels=4
model.encoder_stage_channels=2,4
model.coverage_filters=2
model.max_decode_len=12
train.batch_size=2
epochs=2
eval_every=2
"""


def run(argv):
    out = io.StringIO()
    code = main(argv + ['--log-level', 'WARNING'], out)
    return code, out.getvalue()


def test_parse_prints_tuples():
    code, text = run(['parse', 'x ^ { 2 } + 1'])
    assert code == 0
    assert text.splitlines() == ["x\t-1\tStart", "2\t0\tSup", "+\t0\tForward", "1\t2\tForward"]


def test_flip_from_latex_and_tuples(tmp_path):
    code, text = run(['flip', 'x^{2}+1'])
    assert code == 0
    assert text.splitlines()[0] == "1\t-1\tStart"

    path = tmp_path / "tree.tsv"
    path.write_text(text, encoding='utf-8')
    code, back = run(['flip', '--tuples', str(path)])
    assert code == 0
    assert back == run(['parse', 'x ^ { 2 } + 1'])[1]


def test_domain_error_exit_code(capsys):
    code, text = run(['parse', 'x^{2'])
    assert code == 1
    assert text == ""
    assert "UnbalancedBraces:" in capsys.readouterr().err


def test_flip_requires_input():
    assert run(['flip'])[0] == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(['parse'])
    assert info.value.code == 2


HELP_FLAGS = {
    'parse': [],
    'flip': ['--tuples'],
    'lint': [],
    'gen': ['--seed', '--count', '--out', '--max-depth', '--max-chain', '--weights', '--noise-p',
            '--jitter', '--ambiguity-k'],
    'train': ['--data', '--config', '--out', '--eval-data', '--epochs', '--batch-size', '--lr-peak',
              '--rho', '--eps', '--seed', '--eval-every', '--clip-norm', '--resume'],
    'eval': ['--ckpt', '--data', '--format'],
    'infer': ['--ckpt', '--image'],
    'ablate': ['--mode', '--volumes', '--seeds', '--test-count', '--epochs', '--batch-size',
               '--hidden-dim', '--out', '--gate'],
}


@pytest.mark.parametrize("command", sorted(HELP_FLAGS))
def test_help_lists_flags_with_defaults(command, capsys):
    with pytest.raises(SystemExit) as info:
        main([command, '--help'])
    assert info.value.code == 0
    text = " ".join(capsys.readouterr().out.split())
    flags = HELP_FLAGS[command] + ['--log-level', '--log-file']
    for flag in flags:
        assert flag in text
    assert text.count("(default:") >= len(flags)


def test_help_shows_concrete_defaults(capsys):
    with pytest.raises(SystemExit):
        main(['gen', '--help'])
    text = " ".join(capsys.readouterr().out.split())
    assert "(default: 3)" in text
    assert "(default: 8)" in text
    assert "(default: 0.0)" in text


@pytest.mark.parametrize("argv", [
    ['ablate', '--mode', 'config1', '--volumes', 'abc'],
    ['ablate', '--mode', 'config1', '--seeds', '0,x'],
    ['gen', '--count', 'two', '--out', 'unused'],
])
def test_malformed_flag_values_are_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert "usage:" in capsys.readouterr().err


def test_malformed_weights_exit_code(tmp_path, capsys):
    code, _ = run(['gen', '--count', '1', '--out', str(tmp_path), '--weights', 'atom=many'])
    assert code == 1
    assert "ConfigError:" in capsys.readouterr().err


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    data = str(root / "data")
    code, text = run(['gen', '--seed', '3', '--count', '4', '--out', data, '--max-depth', '2',
                      '--max-chain', '3', '--noise-p', '0.01'])
    assert code == 0
    config = root / "tiny.cfg"
    config.write_text(TINY_CONFIG, encoding='utf-8')
    out_dir = str(root / "run")
    code, log_csv = run(['train', '--data', data, '--config', str(config), '--out', out_dir])
    assert code == 0
    return {'root': root, 'data': data, 'out': out_dir, 'log': log_csv}


def test_gen_and_lint(workspace):
    assert os.path.isfile(os.path.join(workspace['data'], Config.MANIFEST_NAME))
    code, text = run(['lint', workspace['data']])
    assert (code, text) == (0, "ok\t4\n")
    code, text = run(['lint', os.path.join(workspace['data'], Config.MANIFEST_NAME)])
    assert code == 0


def test_lint_missing_manifest(tmp_path):
    assert run(['lint', str(tmp_path)])[0] == 1


def test_train_writes_checkpoint_and_log(workspace):
    frame = pd.read_csv(io.StringIO(workspace['log']))
    assert list(frame['epoch']) == [0, 1]
    assert os.path.isfile(os.path.join(workspace['out'], Config.CHECKPOINT_NAME))
    assert os.path.isfile(os.path.join(workspace['out'], Config.TRAIN_LOG_NAME))


def test_train_rejects_unknown_config_key(workspace):
    bad = workspace['root'] / "bad.cfg"
    bad.write_text("model.nonsense=1\n", encoding='utf-8')
    code, _ = run(['train', '--data', workspace['data'], '--config', str(bad),
                   '--out', str(workspace['root'] / "bad")])
    assert code == 1


def test_eval_outputs_json(workspace):
    checkpoint = os.path.join(workspace['out'], Config.CHECKPOINT_NAME)
    code, text = run(['eval', '--ckpt', checkpoint, '--data', workspace['data'], '--format', 'json'])
    assert code == 0
    report = json.loads(text)
    assert 0.0 <= report['exprate'] <= 1.0
    assert len(report['verdicts']) == 4


def test_infer_prints_three_lines(workspace):
    checkpoint = os.path.join(workspace['out'], Config.CHECKPOINT_NAME)
    image = os.path.join(workspace['data'], "images", "000000.pgm")
    code, text = run(['infer', '--ckpt', checkpoint, '--image', image])
    if code == 0:
        keys = [line.split('\t')[0] for line in text.splitlines()]
        assert keys == ['latex', 'r2l', 'final']
    else:
        assert code == 1


def test_infer_missing_checkpoint(workspace):
    image = os.path.join(workspace['data'], "images", "000000.pgm")
    assert run(['infer', '--ckpt', str(workspace['root'] / "none.mtck"), '--image', image])[0] == 1
