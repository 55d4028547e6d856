import json
import os
import subprocess

import pytest

import wagstaff_bls as wb

CLI = os.environ.get("WAGSTAFF_CLI")


def test_wagstaff_values():
    assert wb.wagstaff_number(5) == 11
    assert wb.wagstaff_number(13) == 2731
    assert wb.wagstaff_number(43) == 2932031007403
    for p in (5, 7, 11, 13):
        assert wb.wagstaff_number(p) == (2**p + 1) // 3


def test_kernels_agree_with_python():
    assert wb.mod_pow(3, 100, 101) == pow(3, 100, 101)
    assert wb.digits10(10**50) == 51
    assert wb.bit_length(2**127 - 1) == 127
    assert wb.is_probable_prime(2**127 - 1)
    assert not wb.is_probable_prime(2047)
    assert wb.jacobi(2, 7) == 1
    assert wb.jacobi(3, 7) == -1


def test_cyclotomic_identity():
    for n in (1, 6, 12, 30, 96):
        prod = 1
        for d in wb.divisors(n):
            prod *= wb.phi_at_2(d)
        assert prod == 2**n - 1
    assert wb.euler_phi(12) == 4
    assert wb.mobius(30) == -1


def test_pell_norm_identity():
    for n in range(12):
        u, v = wb.pell(n)
        assert v * v - 8 * u * u == (4 if n % 2 == 0 else -4)


def test_condition_two():
    r = wb.condition_two(13)
    assert r["holds"] and r["epsilon"] == -1 and r["delta"] == -1
    assert r["value"] == (wb.wagstaff_number(13) - 1, 0)
    assert not wb.condition_two(29)["holds"]
    with pytest.raises(wb.NotCoprimeError):
        wb.chua_check(4, 15)


def test_prove_verify_roundtrip(tmp_path):
    out = tmp_path / "w13.cert.json"
    summary = wb.prove_to_file(13, str(out))
    assert summary["exponent"] == 13
    assert summary["form"] == "sqrt"
    assert summary["chua_holds"]
    assert len(summary["digest"]) == 64

    report = wb.verify_file(str(out))
    assert report["pass"]
    assert [s["step"] for s in report["steps"]] == list(range(1, 10))
    assert all(s["pass"] for s in report["steps"])

    # determinism: a second run writes byte-identical output
    out2 = tmp_path / "w13b.cert.json"
    wb.prove_to_file(13, str(out2))
    assert out.read_bytes() == out2.read_bytes()

    # a tampered file is rejected, not accepted with caveats
    doc = json.loads(out.read_text())
    doc["n_digits"] = str(int(doc["n_digits"]) + 1)
    bad = tmp_path / "bad.cert.json"
    bad.write_text(json.dumps(doc))
    assert not wb.verify_file(str(bad))["pass"]


def test_composite_raises():
    with pytest.raises(wb.CompositeError):
        wb.prove_to_file(29, os.devnull)


def test_feasibility_scan():
    rows = wb.feasibility_scan([2617, 5807])
    assert rows[0]["feasible"] and rows[0]["pm1_factorization"] == "2^3 · 3 · 109"
    assert not rows[1]["feasible"] and rows[1]["blocking_d"] == 2903


def test_factor_phi():
    out = wb.factor_phi(11)
    assert out["complete"]
    assert [(p, e) for p, e, _ in out["factors"]] == [(23, 1), (89, 1)]


@pytest.mark.skipif(CLI is None, reason="WAGSTAFF_CLI not set")
def test_cli_prove_and_verify(tmp_path):
    cert = tmp_path / "w61.cert.json"
    r = subprocess.run([CLI, "prove", "--p", "61", "--out", str(cert)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stdout + r.stderr
    assert "p 61" in r.stdout

    v = subprocess.run([CLI, "verify", str(cert)], capture_output=True, text=True)
    assert v.returncode == 0
    assert "VERIFIED" in v.stdout

    # library and CLI agree on the file
    assert wb.verify_file(str(cert))["pass"]
    assert wb.certificate_summary(str(cert))["exponent"] == 61


@pytest.mark.skipif(CLI is None, reason="WAGSTAFF_CLI not set")
def test_cli_composite_exit():
    r = subprocess.run([CLI, "prove", "--p", "37", "--out", os.devnull],
                       capture_output=True, text=True)
    assert r.returncode == 1
    assert "composite" in r.stdout
