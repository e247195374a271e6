// Shapes mirror the served map file; the client never derives geometry.
export {};
