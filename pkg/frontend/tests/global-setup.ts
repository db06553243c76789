/** Boots the real session service (mock providers) for the test run. */

import { spawn, type ChildProcess } from "node:child_process";

export const BASE_URL = "http://127.0.0.1:8951";

let server: ChildProcess | undefined;

async function waitForServer(timeoutMs = 30000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
        try {
            const response = await fetch(`${BASE_URL}/sessions/probe`);
            if (response.status === 404) return; // uniform 404 body means it's up
        } catch {
            // not listening yet
        }
        await new Promise((resolve) => setTimeout(resolve, 200));
    }
    throw new Error("session service did not come up in time");
}

export async function setup(): Promise<void> {
    server = spawn(
        "python3",
        ["-m", "storycanvas.cli", "serve", "--port", "8951", "--host", "127.0.0.1", "--mock"],
        { stdio: "ignore" },
    );
    await waitForServer();
}

export async function teardown(): Promise<void> {
    server?.kill("SIGTERM");
}
