import pytest
from hypothesis import given, strategies as st

from bgis.errors import (EmptyMessage, GatewayUnconfigured, InvalidField,
                         NotFound, UnsupportedCharset)
from bgis.notify import (GSM7_BASIC, GatewayResult, MockSmsGateway,
                         NotifyService, segment_message)
from bgis.registry import RegistryService
from bgis.store import SimulatedCrash, Store

from fixtures import make_store, profile_for


class TestSegmentation:
    @pytest.mark.parametrize("length,expected", [
        (1, 1), (159, 1), (160, 1), (161, 2), (306, 2), (307, 3), (459, 3),
        (460, 4),
    ])
    def test_boundaries(self, length, expected):
        segments = segment_message("a" * length)
        assert len(segments) == expected

    def test_161_splits_153_plus_8(self):
        segments = segment_message("a" * 161)
        assert [len(s) for s in segments] == [153, 8]

    def test_empty_rejected(self):
        with pytest.raises(EmptyMessage):
            segment_message("")

    def test_non_gsm7_rejected(self):
        with pytest.raises(UnsupportedCharset) as err:
            segment_message("baha sa zone 1 ⚠")
        assert "⚠" in err.value.details["characters"]

    def test_gsm7_repertoire_accepted(self):
        segments = segment_message("@£$¥ èéùìòÇ ØøÅå [brackets] {braces} ~€")
        assert len(segments) == 1

    @given(st.text(alphabet=sorted(set(GSM7_BASIC) - {"\n", "\r"}),
                   min_size=1, max_size=500))
    def test_concatenation_reconstructs_original(self, text):
        segments = segment_message(text)
        assert "".join(segments) == text
        if len(segments) == 1:
            assert len(segments[0]) <= 160
        else:
            assert all(len(s) <= 153 for s in segments)


def _store_with_phones():
    store = make_store()
    registry = RegistryService(store)
    ids = {}
    rows = [
        ("Santos", "Ana", 1, "+639170000001"),
        ("Reyes", "Jose", 1, "+639170000002"),
        ("Cruz", "Liza", 1, "+639170000003"),
        ("Garcia", "Juan", 2, "+639170000004"),
        ("Torres", "Mia", 2, None),
        ("Flores", "Rey", 3, "+639170000001"),  # shares Ana's phone
    ]
    for i, (last, first, zone, phone) in enumerate(rows):
        result = registry.register_resident(profile_for(
            last, first, "X", i, zone_id=zone, mobile_number=phone))
        ids[f"{last}, {first}"] = result.resident_id
    return store, ids


class TestAudience:
    def test_zone_filter_returns_phone_holders(self):
        store, _ = _store_with_phones()
        notify = NotifyService(store, gateway=MockSmsGateway())
        assert len(notify.resolve_audience({"kind": "zone", "zone_id": 1})) == 3
        # zone 2 has one resident with a phone and one without
        assert len(notify.resolve_audience({"kind": "zone", "zone_id": 2})) == 1

    def test_shared_phone_collapses_to_first_resident(self):
        store, ids = _store_with_phones()
        notify = NotifyService(store, gateway=MockSmsGateway())
        audience = notify.resolve_audience({"kind": "all"})
        by_phone = {phone: rid for rid, phone in audience}
        assert by_phone["+639170000001"] == ids["Santos, Ana"]
        assert len(audience) == 4  # 5 distinct phones minus the duplicate

    def test_all_filter_equals_full_scan_dedupe(self):
        store, _ = _store_with_phones()
        notify = NotifyService(store, gateway=MockSmsGateway())
        audience = notify.resolve_audience({"kind": "all"})
        seen = set()
        expected = []
        for r in sorted(store.state.residents.values(),
                        key=lambda r: r.resident_id):
            if r.mobile_number and r.mobile_number not in seen:
                seen.add(r.mobile_number)
                expected.append((r.resident_id, r.mobile_number))
        assert audience == expected

    def test_explicit_list_filter(self):
        store, ids = _store_with_phones()
        notify = NotifyService(store, gateway=MockSmsGateway())
        audience = notify.resolve_audience(
            {"kind": "residents",
             "resident_ids": [ids["Santos, Ana"], ids["Torres, Mia"]]})
        assert [rid for rid, _ in audience] == [ids["Santos, Ana"]]

    def test_bad_filter_rejected(self):
        store, _ = _store_with_phones()
        notify = NotifyService(store, gateway=MockSmsGateway())
        with pytest.raises(InvalidField):
            notify.resolve_audience({"kind": "everyone"})


class TestDispatch:
    def test_all_accepted_single_attempt(self):
        store, _ = _store_with_phones()
        gateway = MockSmsGateway()
        notify = NotifyService(store, gateway=gateway, sleep=lambda s: None)
        job = notify.create_broadcast("Evacuation drill on Saturday 9am.",
                                      {"kind": "zone", "zone_id": 1}, "sec1")
        done = notify.dispatch(job.job_id)
        assert all(r.status == "sent" and r.attempts == 1 for r in done.recipients)
        assert len(gateway.delivered) == 3
        for r in done.recipients:
            history = store.state.transactions[r.resident_id]
            assert history[-1].kind == "sms_sent"
            assert history[-1].reference_id == job.job_id

    def test_transient_twice_then_accept(self):
        store, _ = _store_with_phones()
        gateway = MockSmsGateway(script=["transient", "transient", "accepted"])
        sleeps = []
        notify = NotifyService(store, gateway=gateway, sleep=sleeps.append)
        job = notify.create_broadcast(
            "Water interruption tomorrow.",
            {"kind": "residents",
             "resident_ids": [next(iter(store.state.residents))]}, "sec1")
        done = notify.dispatch(job.job_id)
        recipient = done.recipients[0]
        assert recipient.status == "sent"
        assert recipient.attempts == 3
        assert sleeps == [1.0, 2.0]  # backoff before each retry

    def test_rejected_fails_immediately(self):
        store, _ = _store_with_phones()
        gateway = MockSmsGateway(script=["rejected"])
        notify = NotifyService(store, gateway=gateway, sleep=lambda s: None)
        job = notify.create_broadcast(
            "hello", {"kind": "residents",
                      "resident_ids": [next(iter(store.state.residents))]}, "sec1")
        done = notify.dispatch(job.job_id)
        assert done.recipients[0].status == "failed"
        assert done.recipients[0].attempts == 1
        assert gateway.delivered == {}

    def test_three_transients_exhaust_retries(self):
        store, _ = _store_with_phones()
        gateway = MockSmsGateway(script=["transient"] * 5)
        notify = NotifyService(store, gateway=gateway, sleep=lambda s: None)
        job = notify.create_broadcast(
            "hello", {"kind": "residents",
                      "resident_ids": [next(iter(store.state.residents))]}, "sec1")
        done = notify.dispatch(job.job_id)
        assert done.recipients[0].status == "failed"
        assert done.recipients[0].attempts == 3
        assert len(gateway.calls) == 3

    def test_crash_after_provider_accept_no_double_delivery(self, tmp_path):
        store = Store(path=tmp_path / "events.log")
        registry = RegistryService(store)
        registry.register_resident(profile_for("Santos", "Ana", "X", 0,
                                               mobile_number="+639170000001"))
        gateway = MockSmsGateway(script=["accepted_crash", "accepted"])
        notify = NotifyService(store, gateway=gateway, sleep=lambda s: None)
        job = notify.create_broadcast("brownout advisory", {"kind": "all"}, "sec1")
        with pytest.raises(SimulatedCrash):
            notify.dispatch(job.job_id)
        store.close()

        # restart: recipient is still pending, dispatch resumes with same key
        reopened = Store(path=tmp_path / "events.log")
        notify2 = NotifyService(reopened, gateway=gateway, sleep=lambda s: None)
        assert reopened.state.broadcasts[job.job_id].recipients[0].status == "pending"
        done = notify2.dispatch(job.job_id)
        assert done.recipients[0].status == "sent"
        assert len(gateway.calls) == 2
        assert len(gateway.delivered) == 1  # idempotency key deduplicated
        reopened.close()

    def test_unconfigured_gateway_rejected(self):
        store, _ = _store_with_phones()
        notify = NotifyService(store, gateway=None)
        job = notify.create_broadcast("hi", {"kind": "all"}, "sec1")
        with pytest.raises(GatewayUnconfigured):
            notify.dispatch(job.job_id)

    def test_unknown_job_rejected(self):
        store, _ = _store_with_phones()
        notify = NotifyService(store, gateway=MockSmsGateway())
        with pytest.raises(NotFound):
            notify.dispatch("JOB-999999")

    def test_multipart_message_sends_one_call_per_segment(self):
        store, _ = _store_with_phones()
        gateway = MockSmsGateway()
        notify = NotifyService(store, gateway=gateway, sleep=lambda s: None)
        text = "x" * 200  # two segments
        job = notify.create_broadcast(
            text, {"kind": "residents",
                   "resident_ids": [next(iter(store.state.residents))]}, "sec1")
        notify.dispatch(job.job_id)
        assert len(gateway.calls) == 2
        assert [c["text"] for c in gateway.calls] == [text[:153], text[153:]]
        keys = [c["key"] for c in gateway.calls]
        assert len(set(keys)) == 2


class TestGatewayResult:
    def test_failure_outcomes_need_reason(self):
        with pytest.raises(InvalidField):
            GatewayResult("rejected")
        assert GatewayResult("rejected", reason="bad number").reason == "bad number"
