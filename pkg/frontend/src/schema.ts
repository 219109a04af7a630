/**
 * Wire schemas for the routing service. Every object is strict: a payload
 * carrying any unexpected field (an engine name, most importantly) fails
 * validation and never reaches the UI.
 */
import { z } from "zod";

export const GeometrySchema = z
  .object({
    type: z.literal("LineString"),
    coordinates: z.array(z.tuple([z.number(), z.number()])),
  })
  .strict();

export const RouteSchema = z
  .object({
    display_minutes: z.number().int().nonnegative(),
    travel_time_seconds: z.number().positive(),
    geometry: GeometrySchema,
  })
  .strict();

export const GroupSchema = z
  .object({
    label: z.string().regex(/^[A-Z]$/),
    routes: z.array(RouteSchema).min(1),
  })
  .strict();

export const QueryResultSchema = z
  .object({
    schema_version: z.literal(1),
    query_id: z.string().min(1),
    fastest_time_seconds: z.number().positive(),
    fastest_display_minutes: z.number().int().nonnegative(),
    groups: z.array(GroupSchema).min(1),
    omitted_groups: z.number().int().nonnegative(),
  })
  .strict();

export const RatingResponseSchema = z
  .object({
    ok: z.literal(true),
    query_id: z.string(),
  })
  .strict();

export type QueryResult = z.infer<typeof QueryResultSchema>;
export type RouteGroup = z.infer<typeof GroupSchema>;

export function parseQueryResult(payload: unknown): QueryResult {
  return QueryResultSchema.parse(payload);
}
