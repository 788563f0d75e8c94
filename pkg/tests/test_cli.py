import numpy as np
import pytest

from setcx.bitstrings import random_bitstring, write_string_set
from setcx.cli import load_config, main
from setcx.errors import ConfigurationError
from setcx.graphinfo import two_cliques


@pytest.fixture
def strings_file(tmp_path):
    p = tmp_path / "strings.txt"
    write_string_set(p, [random_bitstring(300, s) for s in range(5)])
    return p


def body(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_psi_happy_path(strings_file, capsys):
    assert main(["psi", "--input", str(strings_file), "--calibrate", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "#seed=7" in out and "#compressor=deflate:9" in out and "#norm=xi" in out
    assert body(out)[0] == "n,norm,theta,theta_pair,lambda,phi,psi,delta_sq"
    assert body(out)[1].startswith("5,xi,")


def test_psi_writes_out_and_per_pair(strings_file, tmp_path):
    out, pp = tmp_path / "r.csv", tmp_path / "pp.csv"
    rc = main(["psi", "--input", str(strings_file), "--out", str(out), "--per-pair", str(pp),
               "--norm", "pairs-mean", "--kernel", "dlnd"])
    assert rc == 0
    assert body(out.read_text())[1].split(",")[1] == "pairs_mean"
    assert len(pp.read_text().splitlines()) == 1 + 10


def test_measures_and_ncd(strings_file, capsys):
    assert main(["measures", "--input", str(strings_file)]) == 0
    rows = body(capsys.readouterr().out)
    assert rows[0].startswith("kernel,") and len(rows) == 6
    assert main(["ncd", "--input", str(strings_file), "--calibrate"]) == 0
    rows = body(capsys.readouterr().out)
    assert rows[0] == "i,j,d" and len(rows) == 11


def test_graph_psi_and_self_loop(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("\n".join(f"{i} {j}" for i, j in two_cliques(10).edges()) + "\n")
    assert main(["graph-psi", "--input", str(g)]) == 0
    rows = body(capsys.readouterr().out)
    assert rows[0] == "n,edges,psi,mode"
    n, edges, psi, mode = rows[1].split(",")
    assert (n, edges, mode) == ("10", "20", "global")
    assert float(psi) == pytest.approx(0.1916, abs=1e-4)
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 2\n3 3\n")
    assert main(["graph-psi", "--input", str(bad)]) == 1
    err = capsys.readouterr().err
    assert ":3:" in err and "self-loop" in err


def test_graph_max_writes_edge_list(tmp_path, capsys):
    out = tmp_path / "best.txt"
    assert main(["graph-max", "--n", "6", "--restarts", "2", "--iterations", "100",
                 "--graph-out", str(out)]) == 0
    assert out.read_text().startswith("# n=6")
    assert main(["graph-psi", "--input", str(out)]) == 0


def test_usage_errors(capsys):
    assert main(["--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert main([]) == 2
    assert main(["psi", "--nope"]) == 2
    assert main(["psi"]) == 2
    assert main(["frobnicate"]) == 2


def test_runtime_errors(tmp_path, capsys):
    assert main(["psi", "--input", str(tmp_path / "missing.txt")]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("0101\n01a1\n")
    assert main(["psi", "--input", str(bad)]) == 1
    assert ":2:" in capsys.readouterr().err
    assert main(["psi", "--input", str(bad), "--compressor", "brotli"]) == 1


def test_load_config(tmp_path):
    p = tmp_path / "c.conf"
    p.write_text("# fig1 settings\nN = 25\nL = 1000\nseed = 4  # trailing\n")
    cfg = load_config(p)
    assert (cfg.N, cfg.L, cfg.seed, cfg.replicates) == (25, 1000, 4, 10)
    p.write_text("experiment = fig4\np_step = 0.01\n")
    assert load_config(p).sweep_config().p_values[:3] == [0.05, 0.06, 0.07]


def test_load_config_errors(tmp_path):
    p = tmp_path / "c.conf"
    p.write_text("N = 25\nbogus = 3\n")
    with pytest.raises(ConfigurationError, match=r":2: unknown key 'bogus'.*valid keys"):
        load_config(p)
    p.write_text("N 25\n")
    with pytest.raises(ConfigurationError, match=":1:"):
        load_config(p)
    p.write_text("N = many\n")
    with pytest.raises(ConfigurationError, match=":1:"):
        load_config(p)


def test_flags_override_config(tmp_path, capsys):
    conf = tmp_path / "c.conf"
    conf.write_text("N = 4\nL = 60\nreplicates = 1\nseed = 1\n")
    assert main(["fig2", "--config", str(conf), "--seed", "9", "--threads", "1"]) == 0
    out = capsys.readouterr().out
    assert "#config=seed=9" in out and "#config=N=4" in out
    assert body(out)[0] == "step,value,stderr" and len(body(out)) == 6
    conf.write_text("nonsense = 1\n")
    assert main(["fig2", "--config", str(conf)]) == 1


def test_curve_subcommands_with_plot(tmp_path, capsys):
    plot = tmp_path / "plot.csv"
    rc = main(["fig3", "--set-size", "4", "--length", "80", "--replicates", "1",
               "--step-every", "40", "--threads", "1", "--plot", str(plot)])
    assert rc == 0
    assert len(body(capsys.readouterr().out)) == 4
    assert plot.read_text().startswith("x,mean,lower,upper")


def test_fig4_and_fig5_small(capsys):
    rc = main(["fig4", "--n", "50", "--k", "3", "--p-min", "0.2", "--p-max", "0.3",
               "--p-step", "0.1", "--networks", "2", "--traj-len", "4", "--burn-in", "5",
               "--threads", "1"])
    assert rc == 0
    rows = body(capsys.readouterr().out)
    assert rows[0].startswith("p,s,lambda,mean_psi,std_psi") and len(rows) == 3
    assert main(["fig5", "--n", "6", "--restarts", "2", "--iterations", "50"]) == 0
    rows = body(capsys.readouterr().out)
    assert rows[0] == "graph,n,edges,psi,mode" and len(rows) == 3
