public class CandidateFeedbackHelper
{
    public void AssignCandidate(Candidate candidate)
    {
        _candidateStore.Assign(candidate);
    }
    public void ValidateFeedback(Feedback feedback)
    {
        _feedbackStore.Validate(feedback);
    }
}
