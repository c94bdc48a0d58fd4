import json
import threading

from phishlens.history import HistoryStore


def test_append_and_read_newest_first(tmp_path):
    store = HistoryStore(tmp_path)
    for i in range(3):
        store.append({"url": f"http://x{i}.com", "class": "safe"}, "visited")
    entries = store.read()
    assert [e["verdict"]["url"] for e in entries] == [
        "http://x2.com", "http://x1.com", "http://x0.com"]


def test_limit(tmp_path):
    store = HistoryStore(tmp_path)
    for i in range(5):
        store.append({"url": str(i)}, "none")
    assert len(store.read(limit=2)) == 2
    assert [e["verdict"]["url"] for e in store.read(limit=2)] == ["4", "3"]
    assert len(store.read(limit=50)) == 5  # limit above count returns all
    assert store.read(limit=0) == []


def test_empty_store(tmp_path):
    assert HistoryStore(tmp_path).read() == []


def test_duplicate_entries_both_recorded(tmp_path):
    store = HistoryStore(tmp_path)
    store.append({"verdict_id": "abc"}, "visited")
    store.append({"verdict_id": "abc"}, "visited")
    assert len(store.read()) == 2  # log semantics: dedupe is a reader concern


def test_timestamps_non_decreasing_per_file(tmp_path):
    store = HistoryStore(tmp_path)
    for i in range(20):
        store.append({"url": str(i)}, "none")
    for path in sorted(tmp_path.glob("history-*.log")):
        stamps = [json.loads(line)["stored_at"] for line in path.read_text().splitlines()]
        assert stamps == sorted(stamps)


def test_rotation_by_size(tmp_path):
    store = HistoryStore(tmp_path, rotate_bytes=200)
    for i in range(10):
        store.append({"url": f"http://site{i}.example/long/path"}, "declined")
    files = sorted(tmp_path.glob("history-*.log"))
    assert len(files) > 1
    assert len(store.read()) == 10  # reads span all files in order


def test_torn_tail_is_tolerated(tmp_path):
    store = HistoryStore(tmp_path)
    for i in range(4):
        store.append({"url": str(i)}, "visited")
    log = sorted(tmp_path.glob("history-*.log"))[-1]
    with open(log, "a", encoding="utf-8") as fh:
        fh.write('{"verdict": {"url": "torn...')  # simulated mid-write crash
    entries = HistoryStore(tmp_path).read()
    assert len(entries) == 4  # readable prefix only


def test_concurrent_appends_do_not_corrupt(tmp_path):
    store = HistoryStore(tmp_path)

    def worker(tag):
        for i in range(25):
            store.append({"url": f"{tag}-{i}"}, "none")

    threads = [threading.Thread(target=worker, args=(t,)) for t in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    entries = store.read()
    assert len(entries) == 100
    seen = {e["verdict"]["url"] for e in entries}
    assert len(seen) == 100
