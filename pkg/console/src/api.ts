// HTTP client for the barangay service. The console never computes domain
// values itself: everything rendered comes out of these calls.

export interface SessionInfo {
  token: string;
  username: string;
  role: string;
  expires_at: string;
}

export interface Resident {
  resident_id: string;
  last_name: string;
  first_name: string;
  middle_name: string;
  birthdate: string;
  gender: string;
  occupation: string;
  residency_status: string;
  zone_id: number;
  address: string;
  mobile_number: string | null;
  registered_at: string;
}

export interface TransactionEntry {
  resident_id: string;
  kind: string;
  reference_id: string;
  occurred_at: string;
}

export interface BlotterCase {
  case_number: string;
  date_filed: string;
  complainant_ids: string[];
  respondent_ids: string[];
  offense_type: string;
  narrative: string;
  lat: number;
  lon: number;
  zone_id: number;
  status: string;
  audit: string[];
}

export interface Certificate {
  certificate_id: string;
  resident_id: string;
  kind: string;
  purpose: string;
  issued_at: string;
  outcome: "issued" | "denied";
  denial_reason: string | null;
  override_by: string | null;
  document?: string;
}

export interface ZonePolygon {
  zone_id: number;
  name: string;
  boundary: [number, number][];
}

export interface MarkerPayload {
  kind: string;
  lat: number;
  lon: number;
  label: string;
  at: string;
  source_id: string;
}

export interface HotspotGridPayload {
  origin: [number, number];
  cell_size_m: number;
  rows: number;
  cols: number;
  counts: number[][];
  bands: string[][];
  top: { row: number; col: number; count: number; band: string; center: [number, number] }[];
}

export interface RecipientPayload {
  resident_id: string;
  phone: string;
  status: "pending" | "sent" | "failed";
  attempts: number;
  idempotency_key: string;
}

export interface BroadcastJob {
  job_id: string;
  message: string;
  created_by: string;
  created_at: string;
  recipients: RecipientPayload[];
  segments?: number;
}

export interface BroadcastPreview {
  segments: number;
  segment_lengths: number[];
  recipients: number;
}

export interface DatasetMeta {
  dataset_id: string;
  title: string;
  description: string;
  columns: string[];
}

export interface Advisory {
  advisory_id: string;
  title: string;
  body: string;
  published_at: string;
  published_by: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown = {},
  ) {
    super(message);
  }
}

const SESSION_KEY = "bgis.session";

export class ApiClient {
  onUnauthorized: (() => void) | null = null;

  constructor(public baseUrl: string = "") {}

  get session(): SessionInfo | null {
    const raw = sessionStorage.getItem(SESSION_KEY);
    return raw ? (JSON.parse(raw) as SessionInfo) : null;
  }

  setSession(session: SessionInfo | null): void {
    if (session) sessionStorage.setItem(SESSION_KEY, JSON.stringify(session));
    else sessionStorage.removeItem(SESSION_KEY);
  }

  get role(): string | null {
    return this.session?.role ?? null;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const session = this.session;
    if (session) headers["Authorization"] = `Bearer ${session.token}`;
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 401 && !path.startsWith("/api/sessions")) {
      this.setSession(null);
      this.onUnauthorized?.();
    }
    if (!response.ok) {
      let code = "HTTP_ERROR";
      let message = response.statusText;
      let details: unknown = {};
      try {
        const envelope = await response.json();
        code = envelope.code ?? code;
        message = envelope.message ?? message;
        details = envelope.details ?? {};
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message, details);
    }
    return (await response.json()) as T;
  }

  private async requestBytes(path: string): Promise<Uint8Array<ArrayBuffer>> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw new ApiError(response.status, "HTTP_ERROR", response.statusText);
    return new Uint8Array(await response.arrayBuffer());
  }

  // sessions
  async signIn(username: string, password: string): Promise<SessionInfo> {
    const session = await this.request<SessionInfo>("POST", "/api/sessions", {
      username,
      password,
    });
    this.setSession(session);
    return session;
  }

  signOut(): void {
    this.setSession(null);
  }

  // registry
  listResidents(q: string): Promise<{ total: number; residents: Resident[] }> {
    return this.request("GET", `/api/residents?q=${encodeURIComponent(q)}`);
  }

  getHistory(id: string): Promise<{ resident: Resident; transactions: TransactionEntry[] }> {
    return this.request("GET", `/api/residents/${encodeURIComponent(id)}/history`);
  }

  registerResident(profile: Record<string, unknown>): Promise<{ resident_id: string; duplicate_warning: boolean }> {
    return this.request("POST", "/api/residents", profile);
  }

  // blotter / clearance
  listCases(params: { status?: string; respondent_id?: string } = {}): Promise<{ cases: BlotterCase[] }> {
    const query = new URLSearchParams();
    if (params.status) query.set("status", params.status);
    if (params.respondent_id) query.set("respondent_id", params.respondent_id);
    const suffix = query.toString() ? `?${query.toString()}` : "";
    return this.request("GET", `/api/blotter${suffix}`);
  }

  fileBlotter(body: Record<string, unknown>): Promise<{ case_number: string }> {
    return this.request("POST", "/api/blotter", body);
  }

  updateCase(caseNumber: string, status: string): Promise<BlotterCase> {
    return this.request("PATCH", `/api/blotter/${encodeURIComponent(caseNumber)}`, { status });
  }

  issueClearance(body: Record<string, unknown>): Promise<Certificate> {
    return this.request("POST", "/api/clearance", body);
  }

  clearanceHistory(residentId: string): Promise<{ certificates: Certificate[] }> {
    return this.request("GET", `/api/clearance/${encodeURIComponent(residentId)}`);
  }

  // health
  registerChild(body: Record<string, unknown>): Promise<{ child_id: string }> {
    return this.request("POST", "/api/health/children", body);
  }

  listChildren(): Promise<{ children: Record<string, unknown>[] }> {
    return this.request("GET", "/api/health/children");
  }

  recordHealthCase(body: Record<string, unknown>): Promise<{ health_case_id: string }> {
    return this.request("POST", "/api/health/cases", body);
  }

  healthSummary(groupBy: string): Promise<{ group_by: string; summary: Record<string, number> }> {
    return this.request("GET", `/api/health/summary?group_by=${groupBy}`);
  }

  // geodata
  zones(): Promise<{ zones: ZonePolygon[] }> {
    return this.request("GET", "/api/geo/zones");
  }

  markers(kind: string, from = "", to = ""): Promise<{ markers: MarkerPayload[] }> {
    return this.request(
      "GET",
      `/api/geo/markers?kind=${kind}&date_from=${from}&date_to=${to}`,
    );
  }

  hotspots(kind: string, cell: number, k: number, from = "", to = ""): Promise<HotspotGridPayload> {
    return this.request(
      "GET",
      `/api/geo/hotspots?kind=${kind}&cell=${cell}&k=${k}&date_from=${from}&date_to=${to}`,
    );
  }

  // analytics
  chart(groupBy: string): Promise<{ group_by: string; counts: Record<string, number> }> {
    return this.request("GET", `/api/analytics/chart?group_by=${groupBy}`);
  }

  report(task: string): Promise<Record<string, any>> {
    return this.request("GET", `/api/analytics/report?task=${task}`);
  }

  train(body: Record<string, unknown>): Promise<Record<string, any>> {
    return this.request("POST", "/api/analytics/train", body);
  }

  // broadcasts
  previewBroadcast(message: string, audience: Record<string, unknown>): Promise<BroadcastPreview> {
    return this.request("POST", "/api/broadcasts/preview", { message, audience });
  }

  createBroadcast(message: string, audience: Record<string, unknown>): Promise<BroadcastJob> {
    return this.request("POST", "/api/broadcasts", { message, audience });
  }

  getBroadcast(jobId: string): Promise<BroadcastJob> {
    return this.request("GET", `/api/broadcasts/${encodeURIComponent(jobId)}`);
  }

  dispatchBroadcast(jobId: string): Promise<BroadcastJob> {
    return this.request("POST", `/api/broadcasts/${encodeURIComponent(jobId)}/dispatch`);
  }

  // open data (public)
  datasets(): Promise<{ datasets: DatasetMeta[] }> {
    return this.request("GET", "/api/opendata");
  }

  downloadDataset(datasetId: string): Promise<Uint8Array<ArrayBuffer>> {
    return this.requestBytes(`/api/opendata/${encodeURIComponent(datasetId)}.csv`);
  }

  advisories(): Promise<{ advisories: Advisory[] }> {
    return this.request("GET", "/api/advisories");
  }

  publishAdvisory(title: string, body: string): Promise<{ advisory_id: string }> {
    return this.request("POST", "/api/advisories", { title, body });
  }

  healthCheck(): Promise<{ status: string; gateway_configured: boolean }> {
    return this.request("GET", "/api/health-check");
  }
}
