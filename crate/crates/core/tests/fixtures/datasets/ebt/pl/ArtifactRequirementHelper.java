public class ArtifactRequirementHelper {
    public void assignArtifact(Artifact artifact) {
        artifactStore.assign(artifact);
    }
    public void listRequirement(Requirement requirement) {
        requirementStore.list(requirement);
    }
    public void scheduleArtifact(Artifact artifact) {
        artifactStore.schedule(artifact);
    }
    public void findRequirement(Requirement requirement) {
        requirementStore.find(requirement);
    }
}
