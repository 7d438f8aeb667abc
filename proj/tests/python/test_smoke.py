import threading

import pytest

import csize


def test_basic_set_operations():
    s = csize.Set("hash", expected=64, max_threads=4)
    t = s.register_thread()
    assert s.insert(t, 5)
    assert not s.insert(t, 5)
    assert s.contains(t, 5)
    assert not s.contains(t, 6)
    assert s.size(t) == 1
    assert s.remove(t, 5)
    assert s.size(t) == 0
    s.deregister_thread(t)
    assert s.structure == "hash"


@pytest.mark.parametrize("structure", ["list", "hash", "naive-list", "naive-hash", "baseline-list", "baseline-hash"])
def test_every_structure_counts(structure):
    s = csize.Set(structure, expected=128)
    t = s.register_thread()
    for k in range(1, 101):
        s.insert(t, k)
    for k in range(1, 101, 2):
        s.remove(t, k)
    assert s.size(t) == 50


def test_threads_from_python():
    s = csize.Set("list", max_threads=8)

    def work(offset):
        t = s.register_thread()
        for k in range(200):
            s.insert(t, k * 4 + offset)
        s.deregister_thread(t)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    t = s.register_thread()
    assert s.size(t) == 800


def test_errors():
    with pytest.raises(ValueError):
        csize.Set("tree")
    s = csize.Set("list", max_threads=1)
    s.register_thread()
    with pytest.raises(RuntimeError):
        s.register_thread()
    with pytest.raises(ValueError):
        csize.table_size_for(0)


def test_stress_history_checks_ok():
    text = csize.run_stress(structure="hash", workers=3, ops=60, seed=7)
    assert text.startswith("# csize-history")
    verdict, witness = csize.check_history(text)
    assert verdict == "ok"
    assert witness == []


def test_checker_flags_negative_size():
    text = "# csize-history\n0 insert 1 ok 0 10\n1 delete 1 ok 1 2\n2 size - -1 3 4\n"
    verdict, witness = csize.check_history(text)
    assert verdict == "violation"
    assert witness[-1].startswith("2 size")


def test_sizing_helpers():
    assert csize.table_size_for(1_000_000) == 2**20
    assert csize.key_range_for(1_000_000) == 1_666_666


def test_bench_csv():
    csv = csize.run_bench("hash", workers=1, size_threads=1, initial_size=100, duration=0.05, warmup=0, rounds=1)
    lines = csv.strip().splitlines()
    assert lines[0] == "structure,workload,workers,size_threads,round,worker_mops,size_kops"
    assert lines[1].startswith("hash,update-heavy,1,1,1,")
    assert [l.split(",")[4] for l in lines[1:]] == ["1", "mean", "cv"]
