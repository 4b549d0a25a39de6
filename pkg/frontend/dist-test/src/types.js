// Shared JSON schemas of the HTTP API. These mirror the backend's canonical
// encodings; the UI never derives numbers beyond plotting transforms.
export {};
