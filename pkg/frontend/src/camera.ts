// Camera capture: live preview in a <video>, button-triggered frame grabs.
// Snapshots are taken on demand rather than streamed; round-tripping every
// frame through the model would be far too slow to be useful.

export interface CapturedFrame {
  imageB64: string;
  mimeType: string;
  width: number;
  height: number;
}

export async function startPreview(video: HTMLVideoElement): Promise<MediaStream> {
  const stream = await navigator.mediaDevices.getUserMedia({
    video: { facingMode: "environment" },
    audio: false,
  });
  video.srcObject = stream;
  await video.play();
  return stream;
}

export function stopPreview(video: HTMLVideoElement): void {
  const stream = video.srcObject as MediaStream | null;
  stream?.getTracks().forEach((track) => track.stop());
  video.srcObject = null;
}

/** Grab the current video frame as a base64 PNG. */
export function captureFrame(video: HTMLVideoElement): CapturedFrame {
  const width = video.videoWidth || video.clientWidth;
  const height = video.videoHeight || video.clientHeight;
  const canvas = document.createElement("canvas");
  canvas.width = width;
  canvas.height = height;
  const context = canvas.getContext("2d");
  if (!context) throw new Error("canvas 2d context unavailable");
  context.drawImage(video, 0, 0, width, height);
  const dataUrl = canvas.toDataURL("image/png");
  return {
    imageB64: dataUrl.slice(dataUrl.indexOf(",") + 1),
    mimeType: "image/png",
    width,
    height,
  };
}
