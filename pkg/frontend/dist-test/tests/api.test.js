import { strict as assert } from "node:assert";
import { test } from "node:test";
import { ApiClient } from "../src/api.js";
import { SessionStore, eventFromLogEntry } from "../src/state.js";
import { jsonResponse, loadFixtureLog, refusingFetch, replayFetch } from "./helpers.js";
const LOG = loadFixtureLog();
test("driving the client against recorded responses matches a log replay", async () => {
    const viaClient = new SessionStore();
    const recorder = [];
    const client = new ApiClient("", replayFetch(LOG), recorder);
    // Re-issue the recorded conversation through the typed client.
    const pen = await client.pendulumExample(1, 1);
    const sysPen = pen.data.certificate.system;
    const design = pen.data.design;
    await client.roots(sysPen, {
        re_lo: design.s0 - 8.0 / design.tau,
        re_hi: design.s0 + 4.0 / design.tau,
        im_lo: 0.0,
        im_hi: 40.0 / design.tau,
    });
    await client.simulate(sysPen, { kind: "polynomial", coeffs: [0.1] }, 20.0 * design.tau, {
        stride: 20,
        tSkip: 12.0 * design.tau,
    });
    const tr = await client.transportExample(1, 1);
    await client.roots(tr.data.certificate.system, { re_lo: -10.0, re_hi: -1.0, im_lo: 0.0, im_hi: 40.0 });
    await client.transportSim(1, 1, tr.data.design.k_p, tr.data.design.k_i, 8.0, { nx: 48, stride: 20 });
    for (const tau of [0.3, 0.6, 0.9, 1.2]) {
        await client.pendulumExample(1, 1, tau, false);
    }
    for (const entry of recorder) {
        const event = eventFromLogEntry(entry);
        if (event)
            viaClient.apply(event);
    }
    const viaReplay = new SessionStore();
    viaReplay.replay(LOG.filter((e) => e.response.ok));
    assert.deepEqual(viaClient.state, viaReplay.state);
});
test("request ids increment and are echoed", async () => {
    const seen = [];
    const fetchImpl = async (_url, init) => {
        const body = JSON.parse(String(init?.body));
        seen.push(body.id);
        return jsonResponse({ ok: true, data: { n: 1, window: 5, zeta: [] }, id: body.id });
    };
    const client = new ApiClient("", fetchImpl);
    const first = await client.chain(1, 5);
    const second = await client.chain(1, 5);
    assert.deepEqual(seen, ["req-1", "req-2"]);
    assert.equal(first.id, "req-1");
    assert.equal(second.id, "req-2");
});
test("with the network disabled no new numbers can be produced", async () => {
    const store = new SessionStore();
    store.replay(LOG);
    const cached = JSON.parse(JSON.stringify(store.state));
    const client = new ApiClient("", refusingFetch());
    await assert.rejects(client.synthesize(1, 1, 1.0, -2.0), /network disabled/);
    await assert.rejects(client.pendulumExample(1, 1), /network disabled/);
    await assert.rejects(client.roots(cached.certificate.system, { re_lo: -4, re_hi: 0, im_lo: 0, im_hi: 10 }), /network disabled/);
    // The session still renders exactly the cached data: nothing appeared,
    // nothing changed.
    assert.deepEqual(store.state, cached);
});
